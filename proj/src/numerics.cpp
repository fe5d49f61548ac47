#include "vdm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace vdm {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1 ||
      !(truncation_radius > 0.0))
    throw std::invalid_argument("invalid quadrature spec");
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - hl * kXgk[i]);
    fv[14 - i] = f(c + hl * kXgk[i]);
  }
  fv[7] = f(c);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
  resk += kWgk[7] * fv[7];
  // Gauss points are the odd-indexed Kronrod nodes.
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  resg += kWg[3] * fv[7];
  double value = resk * hl;
  double err = std::abs((resk - resg) * hl);
  // QUADPACK-style error sharpening.
  if (err > 0.0) {
    double scale = std::pow(200.0 * err / std::abs(value + 1e-300), 1.5);
    if (scale < 1.0) err = std::abs(value) * scale / 200.0 + 1e-300;
  }
  return {value, err};
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

double integrate_finite(const std::function<double(double)>& f, double a,
                        double b, const QuadratureSpec& spec) {
  std::priority_queue<Panel> panels;
  PanelResult r = gk15(f, a, b);
  panels.push({a, b, r.value, r.error});
  double total = r.value, total_err = r.error;
  int used = 1;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (used >= spec.max_subdivisions) throw QuadratureError(total, total_err);
    Panel worst = panels.top();
    panels.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) throw QuadratureError(total, total_err);
    PanelResult left = gk15(f, worst.a, mid);
    PanelResult right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push({worst.a, mid, left.value, left.error});
    panels.push({mid, worst.b, right.value, right.error});
    ++used;
  }
  return total;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& spec) {
  spec.validate();
  if (std::isinf(b)) {
    // Map (a, inf) onto (0, 1) via x = a + u/(1-u). Beyond the truncation
    // radius the integrand is dropped once it has fallen under abs_tol/10.
    double cutoff = a + spec.truncation_radius;
    double floor_val = spec.abs_tol / 10.0;
    auto g = [&](double u) {
      double one_minus = 1.0 - u;
      if (one_minus <= 0.0) return 0.0;
      double x = a + u / one_minus;
      double fx = f(x);
      // Truncation applies to the mapped magnitude, so heavy polynomial tails
      // (which stay O(1) under the map) are never dropped.
      if (x > cutoff && std::abs(fx) < floor_val * one_minus * one_minus)
        return 0.0;
      return fx / (one_minus * one_minus);
    };
    return integrate_finite(g, 0.0, 1.0, spec);
  }
  if (!(a < b)) throw std::invalid_argument("integration range must have a < b");
  return integrate_finite(f, a, b, spec);
}

namespace {

// Iterative radix-2 FFT; sign = -1 forward. In natural (0..n-1) index order.
void fft_pow2(std::vector<std::complex<double>>& x, int sign) {
  int n = static_cast<int>(x.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * std::numbers::pi / len;
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (int k = 0; k < len / 2; ++k) {
        auto u = x[i + k], v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<std::complex<double>> dft_natural(
    const std::vector<std::complex<double>>& in, int sign) {
  int n = static_cast<int>(in.size());
  if (is_pow2(n)) {
    auto out = in;
    fft_pow2(out, sign);
    return out;
  }
  std::vector<std::complex<double>> out(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc(0.0);
    for (int j = 0; j < n; ++j) {
      double ang = sign * 2.0 * std::numbers::pi * k * j / n;
      acc += in[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> dft_forward(const std::vector<double>& values) {
  int n = static_cast<int>(values.size());
  if (n < 1) throw std::invalid_argument("dft of empty vector");
  std::vector<std::complex<double>> in(values.begin(), values.end());
  auto nat = dft_natural(in, -1);
  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i) {
    int freq = dft_frequency(i, n);
    out[i] = nat[(freq % n + n) % n] / static_cast<double>(n);
  }
  return out;
}

std::vector<double> dft_inverse(const std::vector<std::complex<double>>& coeffs) {
  int n = static_cast<int>(coeffs.size());
  if (n < 1) throw std::invalid_argument("dft of empty vector");
  std::vector<std::complex<double>> nat(n);
  for (int i = 0; i < n; ++i) {
    int freq = dft_frequency(i, n);
    nat[(freq % n + n) % n] = coeffs[i];
  }
  auto out = dft_natural(nat, +1);
  std::vector<double> real(n);
  for (int i = 0; i < n; ++i) real[i] = out[i].real();
  return real;
}

GegenbauerEval::GegenbauerEval(double lambda, int cap)
    : order_lambda(lambda), degree_cap(cap) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gegenbauer order must be > 0");
  if (cap < 0) throw std::invalid_argument("gegenbauer degree cap must be >= 0");
}

double gegenbauer(const GegenbauerEval& ev, int n, double x) {
  if (n < 0 || n > ev.degree_cap)
    throw std::invalid_argument("gegenbauer degree outside 0..degree_cap");
  if (std::abs(x) > 1.0)
    throw std::invalid_argument("gegenbauer argument outside [-1,1]");
  double lam = ev.order_lambda;
  double c0 = 1.0;
  if (n == 0) return c0;
  double c1 = 2.0 * lam * x;
  for (int k = 2; k <= n; ++k) {
    double c2 = (2.0 * x * (k + lam - 1.0) * c1 - (k + 2.0 * lam - 2.0) * c0) / k;
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

double second_difference(const GridFunction& f, int i) {
  if (f.domain.kind == DomainKind::ZonalSphere)
    throw std::invalid_argument("second_difference needs a uniform grid");
  if (i < 1 || i > f.size() - 2)
    throw std::invalid_argument("second_difference needs an interior index");
  double h = f.spacing();
  return (f.values[i + 1] - 2.0 * f.values[i] + f.values[i - 1]) / (h * h);
}

}  // namespace vdm
