// Acceptance suite: each test case runs one criterion end to end at its
// stated tolerance and prints one [PASS]/[FAIL] line. Exact mode throughout;
// zero tolerance means exact equality of rationals.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "nhp/quadrature.hpp"
#include "nhp/serialize.hpp"
#include "runner.hpp"

using namespace nhp;
using R = Rational;
namespace fs = std::filesystem;

namespace {

const std::string cfgdir = NHP_CONFIG_DIR;
const fs::path outroot = NHP_ACCEPT_OUT;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int criterion, bool pass, const std::string& detail, double secs) {
  std::ostringstream os;
  os << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail << " ("
     << std::fixed << secs << "s)";
  std::cout << os.str() << std::endl;
}

NikishinSystem<R> benchmark_m2() {
  auto s1 = discretize_uniform<R>(Interval<R>(R(0), R(1)), 40, UniformRule::Midpoint, "sigma1");
  auto s2 = discretize_uniform<R>(Interval<R>(R(2), R(3)), 40, UniformRule::Midpoint, "sigma2");
  return build_system<R>({s1, s2});
}

// ---- compact SHA-256 (FIPS 180-4), enough to fingerprint the CSV ----------
struct Sha256 {
  static std::string hex(const std::string& data) {
    static const uint32_t K[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};
    uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                     0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::string msg = data;
    uint64_t bitlen = static_cast<uint64_t>(msg.size()) * 8;
    msg.push_back('\x80');
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bitlen >> (8 * i)) & 0xff));
    auto rotr = [](uint32_t x, int n) { return (x >> n) | (x << (32 - n)); };
    for (std::size_t off = 0; off < msg.size(); off += 64) {
      uint32_t w[64];
      for (int i = 0; i < 16; ++i)
        w[i] = (static_cast<uint8_t>(msg[off + 4 * i]) << 24) |
               (static_cast<uint8_t>(msg[off + 4 * i + 1]) << 16) |
               (static_cast<uint8_t>(msg[off + 4 * i + 2]) << 8) |
               static_cast<uint8_t>(msg[off + 4 * i + 3]);
      for (int i = 16; i < 64; ++i) {
        uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
      }
      uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6], hh = h[7];
      for (int i = 0; i < 64; ++i) {
        uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        uint32_t ch = (e & f) ^ (~e & g);
        uint32_t t1 = hh + S1 + ch + K[i] + w[i];
        uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        uint32_t mj = (a & b) ^ (a & c) ^ (b & c);
        uint32_t t2 = S0 + mj;
        hh = g; g = f; f = e; e = d + t1;
        d = c; c = b; b = a; a = t1 + t2;
      }
      h[0] += a; h[1] += b; h[2] += c; h[3] += d;
      h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }
    std::ostringstream os;
    for (uint32_t v : h) {
      for (int i = 7; i >= 0; --i) os << "0123456789abcdef"[(v >> (4 * i)) & 0xf];
    }
    return os.str();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("criterion 1: order of contact, exact zeros through |n|-1") {
  Timer tm;
  auto sys = benchmark_m2();
  bool pass = true;
  for (int n = 1; n <= 6 && pass; ++n) {
    MultiIndex idx({n, n});
    auto sol = solve_type1(sys, idx);
    VecX<R> r = remainder_series(sol, sys, {}, static_cast<int>(idx.total()));
    for (int t = 0; t + 1 < idx.total(); ++t)
      if (!r[t].is_zero()) pass = false;
  }
  double secs = tm.seconds();
  CHECK(pass);
  CHECK(secs < 60.0);
  report(1, pass && secs < 60.0,
         "remainder coefficients 1..|n|-1 vanish exactly, n=(n,n), n<=6, w==1", secs);
}

TEST_CASE("criterion 2: structural guarantees of the solve") {
  Timer tm;
  auto sys = benchmark_m2();
  bool pass = true;
  std::string why;
  for (int n = 1; n <= 6 && pass; ++n) {
    MultiIndex idx({n, n});
    auto red = solve_type1(sys, idx, {}, SolvePath::ReducedOrthogonality);
    auto full = solve_type1(sys, idx, {}, SolvePath::FullInterpolation);
    if (red.nullspace_dim != 1) { pass = false; why = "nullspace"; break; }
    for (int j = 0; j <= 2; ++j) {
      if (red.a[j].degree() != idx.cap(j) - 1) { pass = false; why = "degrees"; }
      if (!(red.a[j] == full.a[j])) { pass = false; why = "paths"; }
    }
    auto sc = count_sign_changes<R>([&](const R& x) { return linear_form(red, sys, 1, x); },
                                    R(0), R(1), std::max(64, 8 * 2 * n));
    if (sc.count != static_cast<int>(idx.total()) - 1) { pass = false; why = "zero count"; }
  }
  double secs = tm.seconds();
  CHECK(pass);
  CHECK(secs < 120.0);
  report(2, pass && secs < 120.0,
         "nullspace 1, degrees attained, |n|-1 simple zero crossings, paths equal" +
             (why.empty() ? "" : " [" + why + "]"),
         secs);
}

TEST_CASE("criterion 3: direct form equals the integral representation") {
  Timer tm;
  auto sys = benchmark_m2();
  InterpolationScheme<R> sch;
  sch.add_real_root(R(-3));
  MultiIndex idx({3, 2});
  auto sol = solve_type1(sys, idx, sch);
  const Polynomial<R>& w = sch.weight();

  std::mt19937 rng(20250801);
  std::uniform_int_distribution<int> num(-400, 400), imn(-300, 300), coin(0, 1);
  int checked = 0;
  bool pass = true;
  while (checked < 20) {
    R re = R(num(rng)) / R(32);
    R im = coin(rng) ? R(imn(rng)) / R(32) : R(0);
    if (im.is_zero()) {
      double x = to_double(re);
      if ((x > -0.25 && x < 1.25) || (x > 1.75 && x < 3.25)) continue;
      R lhs = linear_form(sol, sys, 0, re) / w.eval(re);
      if (!(lhs == remainder_integral(sol, sys, sch, re))) pass = false;
    } else {
      if (std::fabs(to_double(im)) < 0.25) continue;
      Complex<R> z(re, im);
      Complex<R> lhs = linear_form(sol, sys, 0, z) / w.eval(z);
      if (!(lhs == remainder_integral(sol, sys, sch, z))) pass = false;
    }
    ++checked;
  }
  double secs = tm.seconds();
  CHECK(pass);
  report(3, pass, "linear_form(j=0)/w == remainder integral at 20 random off-support points, exactly",
         secs);
}

TEST_CASE("criterion 4: moment machinery on the uniform table") {
  Timer tm;
  VecX<R> c(16);
  for (int i = 0; i < 16; ++i) c[i] = R(1, i + 1);
  auto t = MomentTable<R>::from_values("uniform01", c);
  auto inv = inverse_moments(t, 12);

  bool pass = (inv.d[0] == R(-1, 12));
  for (int n = 0; n <= 8; ++n) {
    R om = hessenberg_omega(t, n);
    R c0p(1);
    for (int k = 0; k < n + 3; ++k) c0p *= t.c[0];
    R dn = (n % 2 == 0 ? om : -om) / c0p;
    if (!(dn == inv.d[n])) pass = false;
  }
  for (int n = 0; n <= 12; ++n) {
    R bound = R(1L << (n + 1)) * t.c[n + 2] / (t.c[0] * t.c[0]);
    if (!(abs(inv.d[n]) <= bound)) pass = false;
  }
  for (int n = 0; n <= 4; ++n) {
    auto audit = hessenberg_omega_by_expansion(t, n);
    if (audit.term_count != (1L << (n + 1))) pass = false;
    if (!(audit.value == hessenberg_omega(t, n))) pass = false;
    if (!audit.index_sums_ok) pass = false;
  }
  double secs = tm.seconds();
  CHECK(pass);
  CHECK(secs < 10.0);
  report(4, pass && secs < 10.0,
         "triangular == determinant route (n<=8), d_0 = -1/12, magnitude bound, 2^(n+1) terms",
         secs);
}

TEST_CASE("criterion 5: convergence sweep from the shipped benchmark config") {
  Timer tm;
  RunConfig cfg = parse_config_file(cfgdir + "/benchmark_m2_sweep.json");
  fs::path out = outroot / "crit5";
  fs::remove_all(out);
  std::ostringstream devnull;
  int code = run_sweep(cfg, out.string(), devnull);
  bool pass = (code == 0);

  // read back the report
  json rep = json::parse(slurp(out / "report.json"));
  std::map<int, std::vector<std::pair<long, double>>> e, f;
  for (const auto& row : rep["rows"]) {
    int j = row["j"].get<int>();
    e[j].push_back({row["abs_n"].get<long>(), row["e"].get<double>()});
    f[j].push_back({row["abs_n"].get<long>(), row["f"].get<double>()});
  }
  for (int j = 0; j <= 1; ++j) {
    if (e[j].size() != 5) pass = false;
    // strictly decreasing from n = 3 (|n| = 6) on; our data starts at |n| = 4
    for (std::size_t i = 1; i < e[j].size(); ++i)
      if (e[j][i - 1].first >= 6 && !(e[j][i].second < e[j][i - 1].second)) pass = false;
    for (std::size_t i = 1; i < f[j].size(); ++i)
      if (f[j][i - 1].first >= 6 && !(f[j][i].second <= f[j][i - 1].second)) pass = false;
  }
  double d0 = 2.0, d1 = 2.0;
  for (const auto& fit : rep["fits"]) {
    if (fit["j"].get<int>() == 0) d0 = fit["delta_hat"].get<double>();
    if (fit["j"].get<int>() == 1) d1 = fit["delta_hat"].get<double>();
  }
  if (!(d0 <= 0.9 && d1 <= 0.9)) pass = false;
  double secs = tm.seconds();
  CHECK(pass);
  CHECK(secs < 300.0);
  std::ostringstream detail;
  detail << "e_j strictly decreasing (n>=3), fitted rates " << fmt_double(d0) << ", "
         << fmt_double(d1) << " <= 0.9, f_j decreasing";
  report(5, pass && secs < 300.0, detail.str(), secs);
}

TEST_CASE("criterion 6: exterior zero counts on (k, k+2) shapes") {
  Timer tm;
  auto sys = benchmark_m2();
  auto [center, radius] = default_contour(sys);
  bool match[3] = {false, false, false};
  for (int k = 2; k <= 4; ++k) {
    auto sol = solve_type1(sys, MultiIndex({k, k + 2}));
    auto audit = kappa_audit(sys, sol, center, radius);
    match[k - 2] = !audit.skipped && audit.jbar == 1 && audit.match &&
                   audit.predicted == std::vector<int>{1, 0, 1};
  }
  bool consecutive = (match[0] && match[1]) || (match[1] && match[2]);
  double secs = tm.seconds();
  CHECK(consecutive);
  std::ostringstream detail;
  detail << "counts (1,0,1) matched for k = {";
  for (int k = 2; k <= 4; ++k)
    if (match[k - 2]) detail << " " << k;
  detail << " }, consecutive pair present";
  report(6, consecutive, detail.str(), secs);
}

TEST_CASE("criterion 7: reciprocal-ratio series identity, exact zero through order 10") {
  Timer tm;
  auto sys = benchmark_m2();
  auto res = ratio_identity_residual(sys, 2, 10);
  double secs = tm.seconds();
  bool pass = res.exact_zero && res.order_checked == 10;
  CHECK(pass);
  report(7, pass, "series residual exactly zero through z^-10", secs);
}

TEST_CASE("criterion 8: single-measure limit at z = 2") {
  Timer tm;
  auto sys = build_system<R>(
      {discretize_uniform<R>(Interval<R>(R(0), R(1)), 40, UniformRule::Midpoint, "sigma1")});
  bool pass = true;
  double e2 = -1, prev = 1e300;
  for (int n = 1; n <= 8; ++n) {
    auto sol = solve_type1(sys, MultiIndex({n}));
    R z(2);
    R ratio = sol.a[0].is_zero() ? R(0) : sol.a[0].eval(z) / sol.a[1].eval(z);
    double e = std::fabs(to_double(ratio + cauchy_transform(sys.s(1, 1), z)));
    if (!(e < prev)) pass = false;
    prev = e;
    if (n == 2) e2 = e;
  }
  if (std::fabs(e2 - 0.0265) > 1e-3) pass = false;
  double secs = tm.seconds();
  CHECK(pass);
  std::ostringstream detail;
  detail << "e_0 monotone decreasing for n=1..8, e_0(2) = " << fmt_double(e2) << " within 0.0265 +- 1e-3";
  report(8, pass, detail.str(), secs);
}

TEST_CASE("criterion 9: byte-identical sweep reruns") {
  Timer tm;
  RunConfig cfg = parse_config_file(cfgdir + "/benchmark_m2_sweep.json");
  fs::path o1 = outroot / "crit9a", o2 = outroot / "crit9b";
  fs::remove_all(o1);
  fs::remove_all(o2);
  std::ostringstream devnull;
  int c1 = run_sweep(cfg, o1.string(), devnull);
  cfg.threads = 4;  // determinism must not depend on the thread count
  int c2 = run_sweep(cfg, o2.string(), devnull);
  std::string a = slurp(o1 / "report.csv"), b = slurp(o2 / "report.csv");
  std::string ha = Sha256::hex(a), hb = Sha256::hex(b);
  bool pass = (c1 == 0 && c2 == 0 && !a.empty() && a == b && ha == hb);
  double secs = tm.seconds();
  CHECK(pass);
  report(9, pass, "sha256(report.csv) = " + ha.substr(0, 16) + "... identical across runs/threads",
         secs);
}
