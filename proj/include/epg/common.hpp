#ifndef EPG_COMMON_HPP
#define EPG_COMMON_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace epg {

// Contract violation: bad arguments, unmet preconditions, malformed input.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A guaranteed property failed to hold; indicates a bug, not bad input.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(what);
}

inline void ensure(bool cond, const std::string& what) {
    if (!cond) throw InternalError(what);
}

// Deterministic RNG: all stochastic routines take an explicit seed and draw
// through this wrapper only, so identical seeds replay identical runs on any
// platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform value in [0, n); n >= 1.
    std::uint64_t below(std::uint64_t n) {
        require(n >= 1, "Rng::below: empty range");
        return gen_() % n;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace epg

#endif
