#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace silverkite {

// splitmix64; self-contained so that draws are reproducible across standard
// libraries and platforms.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : state_(seed) {}

	// Independent stream for (seed, index) pairs.
	static Rng for_stream(std::uint64_t seed, std::uint64_t index) {
		Rng mix(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
		mix.next_u64();
		return mix;
	}

	std::uint64_t next_u64() {
		std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
		z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
		z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
		return z ^ (z >> 31);
	}

	// Uniform in [0, 1).
	double uniform() {
		return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
	}

	// Uniform integer in [0, n).
	std::uint64_t uniform_below(std::uint64_t n) {
		return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
	}

	// Standard normal via Box-Muller.
	double normal() {
		if (have_spare_) {
			have_spare_ = false;
			return spare_;
		}
		double u1 = uniform();
		while (u1 <= 0.0) u1 = uniform();
		const double u2 = uniform();
		const double r = std::sqrt(-2.0 * std::log(u1));
		const double a = 2.0 * std::numbers::pi * u2;
		spare_ = r * std::sin(a);
		have_spare_ = true;
		return r * std::cos(a);
	}

private:
	std::uint64_t state_;
	bool have_spare_ = false;
	double spare_ = 0.0;
};

} // namespace silverkite
