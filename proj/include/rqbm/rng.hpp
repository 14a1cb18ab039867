#pragma once

#include <cmath>
#include <cstdint>

namespace rqbm {

inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++. Substreams are derived by seeding splitmix64 with
// (seed, stream) so trajectory i sees the same noise regardless of
// execution order.
class Xoshiro256 {
  public:
    Xoshiro256() : Xoshiro256(0, 0) {}
    Xoshiro256(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in (0,1)
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Marsaglia-Tsang ziggurat, 128 layers. Tables are built once at first use.
class ZigguratNormal {
  public:
    template <typename Rng>
    double operator()(Rng& rng) const {
        const Tables& t = tables();
        for (;;) {
            const auto hz = static_cast<std::int32_t>(rng.next());
            const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
            if (static_cast<std::uint32_t>(hz < 0 ? -static_cast<std::int64_t>(hz) : hz) < t.kn[iz])
                return hz * t.wn[iz];
            double x = hz * t.wn[iz];
            if (iz == 0) {
                // tail, Marsaglia's method
                double y;
                do {
                    x = -std::log(rng.uniform()) / kR;
                    y = -std::log(rng.uniform());
                } while (y + y < x * x);
                return hz > 0 ? kR + x : -kR - x;
            }
            if (t.fn[iz] + rng.uniform() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x))
                return x;
            // fall through: redraw
        }
    }

  private:
    static constexpr double kR = 3.442619855899;
    static constexpr double kV = 9.91256303526217e-3;

    struct Tables {
        std::uint32_t kn[128];
        double wn[128];
        double fn[128];
        Tables() {
            const double m1 = 2147483648.0;
            double dn = kR, tn = kR;
            const double q = kV / std::exp(-0.5 * dn * dn);
            kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
            kn[1] = 0;
            wn[0] = q / m1;
            wn[127] = dn / m1;
            fn[0] = 1.0;
            fn[127] = std::exp(-0.5 * dn * dn);
            for (int i = 126; i >= 1; --i) {
                dn = std::sqrt(-2.0 * std::log(kV / dn + std::exp(-0.5 * dn * dn)));
                kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
                tn = dn;
                fn[i] = std::exp(-0.5 * dn * dn);
                wn[i] = dn / m1;
            }
        }
    };

    static const Tables& tables() {
        static const Tables t;
        return t;
    }
};

}  // namespace rqbm
