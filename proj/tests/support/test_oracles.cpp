#include "support/test_oracles.hpp"

#include <array>
#include <thread>

namespace testor {

namespace {
// 32-point Gauss-Legendre nodes/weights on [0, 1] (upper half mirrored).
struct GL32 {
  std::array<double, 32> x{}, w{};
  GL32() {
    // Nodes on [-1, 1] by Newton iteration on P_32.
    for (int i = 0; i < 32; ++i) {
      double z = std::cos(kPi * (i + 0.75) / 32.5);
      double pp = 0.0;
      for (int it = 0; it < 64; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < 32; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = 32.0 * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
  }
};
const GL32& gl32() {
  static const GL32 rule;
  return rule;
}
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  const auto& rule = gl32();
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels;
    const double pb = a + (b - a) * (p + 1) / panels;
    const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
    for (int i = 0; i < 32; ++i) total += half * rule.w[i] * f(mid + half * rule.x[i]);
  }
  return total;
}

namespace {
// Inner integral of the nine-fold form: I(Q) = int d3u |u - Q e_z| e^{-u^2},
// angular part in closed form.
double inner_shifted_norm(double q_mag) {
  if (q_mag < 1e-12) {
    return 2.0 * kPi * integrate([](double u) { return u * u * u * std::exp(-u * u) * 2.0; },
                                 0.0, 9.0, 12);
  }
  return 2.0 * kPi / (3.0 * q_mag) *
         integrate(
             [q_mag](double u) {
               const double plus = std::pow(u + q_mag, 3.0);
               const double minus = std::pow(std::abs(u - q_mag), 3.0);
               return u * std::exp(-u * u) * (plus - minus);
             },
             0.0, q_mag + 9.0, 24);
}
}  // namespace

double appendix_integral_quadrature(double r) {
  const double qmax = 8.0 * std::sqrt(r) + 2.0;
  return 4.0 * kPi *
         integrate(
             [r](double Q) {
               const double inner = inner_shifted_norm(Q);
               return Q * Q * std::exp(-Q * Q / r) * inner * inner;
             },
             0.0, qmax, 32);
}

namespace {
struct StreamStats {
  double mean = 0.0, m2 = 0.0;
  long n = 0;
};

StreamStats mc_stream(double r, long n_samples, std::uint64_t seed) {
  NormalSampler rng(seed);
  const double sq = std::sqrt(r / 2.0);  // Q ~ exp(-Q^2/r)
  const double su = std::sqrt(0.5);      // u ~ exp(-u^2)
  StreamStats st;
  for (long i = 1; i <= n_samples; ++i) {
    double qv[3], uv[3], wv[3];
    for (auto& c : qv) c = sq * rng.normal();
    for (auto& c : uv) c = su * rng.normal();
    for (auto& c : wv) c = su * rng.normal();
    // Antithetic average over u -> -u and w -> -w kills the leading
    // directional fluctuation of |u - Q|.
    const auto norm3 = [](const double* a, const double* b, double sgn) {
      const double d0 = sgn * a[0] - b[0], d1 = sgn * a[1] - b[1], d2 = sgn * a[2] - b[2];
      return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
    };
    const double f1 = 0.5 * (norm3(uv, qv, 1.0) + norm3(uv, qv, -1.0));
    const double f2 = 0.5 * (norm3(wv, qv, 1.0) + norm3(wv, qv, -1.0));
    const double x = f1 * f2;
    const double delta = x - st.mean;
    st.n = i;
    st.mean += delta / static_cast<double>(i);
    st.m2 += delta * (x - st.mean);
  }
  return st;
}
}  // namespace

McEstimate appendix_integral_mc(double r, long n_samples, std::uint64_t seed) {
  constexpr int kStreams = 8;  // fixed substream count: reproducible anywhere
  std::array<StreamStats, kStreams> stats;
  std::array<std::thread, kStreams> pool;
  const long per = (n_samples + kStreams - 1) / kStreams;
  for (int s = 0; s < kStreams; ++s) {
    pool[s] = std::thread([&, s] {
      stats[s] = mc_stream(r, per, seed + 0x9e3779b97f4a7c15ull * (s + 1));
    });
  }
  for (auto& t : pool) t.join();
  // Pooled mean/variance combined in fixed stream order.
  StreamStats all;
  for (const auto& st : stats) {
    if (all.n == 0) {
      all = st;
      continue;
    }
    const double delta = st.mean - all.mean;
    const long n = all.n + st.n;
    all.m2 += st.m2 + delta * delta * static_cast<double>(all.n) * static_cast<double>(st.n) /
                          static_cast<double>(n);
    all.mean += delta * static_cast<double>(st.n) / static_cast<double>(n);
    all.n = n;
  }
  const double var = all.m2 / (static_cast<double>(all.n) - 1.0);
  const double pref = std::pow(kPi * r, 1.5) * std::pow(kPi, 3.0);
  McEstimate est;
  est.value = pref * all.mean;
  est.stderr_ = pref * std::sqrt(var / static_cast<double>(all.n));
  return est;
}

QuadFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  // Normal equations for the 3x3 system; adequate for the small, well-scaled
  // samples used in tests.
  double s[5] = {0, 0, 0, 0, 0};
  double b[3] = {0, 0, 0};
  for (size_t i = 0; i < x.size(); ++i) {
    double xp = 1.0;
    for (int p = 0; p < 5; ++p) {
      s[p] += xp;
      if (p < 3) b[p] += xp * y[i];
      xp *= x[i];
    }
  }
  double m[3][4] = {{s[0], s[1], s[2], b[0]}, {s[1], s[2], s[3], b[1]}, {s[2], s[3], s[4], b[2]}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
    }
    std::swap(m[col], m[piv]);
    for (int row = 0; row < 3; ++row) {
      if (row == col) continue;
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
    }
  }
  return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

}  // namespace testor
