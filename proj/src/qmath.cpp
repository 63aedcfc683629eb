#include "qreset/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qreset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x ln x with the 0 ln 0 = 0 convention.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Clamp an eigenvalue of a density matrix to [0,1]. Values below -tol are an
// invariant violation, not roundoff.
double clamp_prob(double p, double tol = 1e-12) {
  if (p < -tol) throw InvalidState("eigenvalue " + std::to_string(p) + " below -1e-12");
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

// ----------------------------------------------------------------- Mat2 ---

Mat2 Mat2::adjoint() const {
  return Mat2{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

double Mat2::max_abs() const {
  double r = 0.0;
  for (const auto& e : m) r = std::max(r, std::abs(e));
  return r;
}

bool Mat2::is_hermitian(double tol) const {
  const double scale = std::max(1.0, max_abs());
  return std::abs(m[0].imag()) <= tol * scale && std::abs(m[3].imag()) <= tol * scale &&
         std::abs(m[1] - std::conj(m[2])) <= tol * scale;
}

Mat2& Mat2::operator+=(const Mat2& o) {
  for (int i = 0; i < 4; ++i) m[i] += o.m[i];
  return *this;
}

Mat2& Mat2::operator-=(const Mat2& o) {
  for (int i = 0; i < 4; ++i) m[i] -= o.m[i];
  return *this;
}

Mat2& Mat2::operator*=(Complex s) {
  for (auto& e : m) e *= s;
  return *this;
}

Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return Mat2{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
              a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]};
}

Mat2 operator*(Complex s, Mat2 a) { return a *= s; }
Mat2 operator*(Mat2 a, Complex s) { return a *= s; }
Mat2 operator*(double s, Mat2 a) { return a *= Complex(s, 0.0); }

Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }
Mat2 anticommutator(const Mat2& a, const Mat2& b) { return a * b + b * a; }

Mat2 hermitize(const Mat2& a) {
  Mat2 h = a + a.adjoint();
  return 0.5 * h;
}

// ---------------------------------------------------------- BlochVector ---

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector operator+(const BlochVector& a, const BlochVector& b) {
  return BlochVector{a.x + b.x, a.y + b.y, a.z + b.z};
}

BlochVector operator-(const BlochVector& a, const BlochVector& b) {
  return BlochVector{a.x - b.x, a.y - b.y, a.z - b.z};
}

BlochVector operator*(double s, const BlochVector& a) {
  return BlochVector{s * a.x, s * a.y, s * a.z};
}

double bloch_distance(const BlochVector& a, const BlochVector& b) { return (a - b).norm(); }

// ----------------------------------------------------------- QubitState ---

QubitState::QubitState(const Mat2& density) : m_(density) {
  if (!m_.is_hermitian(1e-12)) throw InvalidState("density matrix is not Hermitian");
  if (std::abs(m_.trace() - Complex(1.0, 0.0)) > 1e-12)
    throw InvalidState("density matrix trace differs from 1");
  // Positivity: smallest eigenvalue of the Hermitian matrix.
  const double h = 0.5 * (m_(0, 0).real() + m_(1, 1).real());
  const double r = std::hypot(0.5 * (m_(0, 0).real() - m_(1, 1).real()), std::abs(m_(0, 1)));
  if (h - r < -1e-12) throw InvalidState("density matrix has eigenvalue below -1e-12");
}

BlochVector QubitState::bloch() const { return density_to_bloch(*this); }

QubitState bloch_to_density(const BlochVector& a) {
  double n = a.norm();
  if (n > 1.0 + 1e-9) throw InvalidState("Bloch vector norm " + std::to_string(n) + " exceeds 1");
  BlochVector v = a;
  if (n > 1.0) v = (1.0 / n) * v;  // within tolerance: treat as pure
  return QubitState(Mat2{Complex(0.5 * (1.0 + v.z), 0.0), 0.5 * Complex(v.x, -v.y),
                         0.5 * Complex(v.x, v.y), Complex(0.5 * (1.0 - v.z), 0.0)});
}

BlochVector density_to_bloch(const QubitState& rho) {
  const Mat2& m = rho.matrix();
  return BlochVector{2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

// --------------------------------------------------------- eig_hermitian ---

Spectrum2 eig_hermitian(const Mat2& m) {
  if (!m.is_hermitian(1e-12)) throw InvalidState("eig_hermitian: matrix is not Hermitian");
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = m(0, 1);
  const double h = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), std::abs(b));

  // The eigenvalue far from zero is safe as h +- r; the other one would
  // cancel, so it comes from the determinant instead (lambda1 * lambda2 =
  // det). Keeps full relative precision for tiny eigenvalues of near-pure
  // states.
  const double det = a * d - std::norm(b);
  const double l_big = h >= 0.0 ? h + r : h - r;
  const double l_other = l_big != 0.0 ? det / l_big : h;

  Spectrum2 s;
  s.values = {std::max(l_big, l_other), std::min(l_big, l_other)};

  const double scale = std::max(1.0, m.max_abs());
  if (r <= 1e-15 * scale) {
    s.vectors = {Vec2{Complex(1.0), Complex(0.0)}, Vec2{Complex(0.0), Complex(1.0)}};
    return s;
  }

  // Eigenvector of the top eigenvalue: pick the better-conditioned of the
  // two algebraic forms.
  const double l1 = s.values[0];
  Vec2 v;
  if (std::abs(l1 - a) >= std::abs(l1 - d)) {
    v = {b, Complex(l1 - a, 0.0)};
  } else {
    v = {Complex(l1 - d, 0.0), std::conj(b)};
  }
  const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  v[0] /= n;
  v[1] /= n;
  s.vectors[0] = v;
  s.vectors[1] = {-std::conj(v[1]), std::conj(v[0])};  // orthonormal partner
  return s;
}

// ------------------------------------------------------------- entropies ---

double von_neumann_entropy(const QubitState& rho) {
  const Spectrum2 s = eig_hermitian(rho.matrix());
  return -(xlogx(clamp_prob(s.values[0])) + xlogx(clamp_prob(s.values[1])));
}

double entropy_of_bloch_norm(double a) {
  if (a < 0.0) throw InvalidState("Bloch norm must be non-negative");
  if (a >= 1.0) return 0.0;
  return -(xlogx(0.5 * (1.0 + a)) + xlogx(0.5 * (1.0 - a)));
}

double relative_entropy(const QubitState& rho, const QubitState& sigma) {
  const Spectrum2 sr = eig_hermitian(rho.matrix());
  double tr_rho_ln_rho = 0.0;
  for (int i = 0; i < 2; ++i) tr_rho_ln_rho += xlogx(clamp_prob(sr.values[i]));

  const Spectrum2 ss = eig_hermitian(sigma.matrix());
  double tr_rho_ln_sigma = 0.0;
  for (int j = 0; j < 2; ++j) {
    const double mu = clamp_prob(ss.values[j]);
    const Vec2& w = ss.vectors[j];
    // <w|rho|w>
    const Mat2& rm = rho.matrix();
    Complex pc = std::conj(w[0]) * (rm(0, 0) * w[0] + rm(0, 1) * w[1]) +
                 std::conj(w[1]) * (rm(1, 0) * w[0] + rm(1, 1) * w[1]);
    const double p = std::max(0.0, pc.real());
    if (mu == 0.0) {
      if (p > 1e-12) return kInf;  // support violation
      continue;
    }
    tr_rho_ln_sigma += p * std::log(mu);
  }
  // Non-negative up to roundoff; do not clamp (callers test the sign).
  return tr_rho_ln_rho - tr_rho_ln_sigma;
}

double trace_distance(const QubitState& rho, const QubitState& sigma) {
  const Mat2 diff = rho.matrix() - sigma.matrix();
  const Spectrum2 s = eig_hermitian(diff);
  return 0.5 * (std::abs(s.values[0]) + std::abs(s.values[1]));
}

CoherenceSplit coherence_decomposition(const QubitState& rho0, const QubitState& alpha0) {
  Spectrum2 sa = eig_hermitian(alpha0.matrix());
  if (sa.values[0] - sa.values[1] <= 1e-12) {
    // alpha0 = I/2: any basis works; fix the computational one.
    sa.vectors = {Vec2{Complex(1.0), Complex(0.0)}, Vec2{Complex(0.0), Complex(1.0)}};
  }

  double kl = 0.0;
  double s_decohered = 0.0;
  const Mat2& rm = rho0.matrix();
  for (int j = 0; j < 2; ++j) {
    const double q = clamp_prob(sa.values[j]);
    const Vec2& w = sa.vectors[j];
    Complex pc = std::conj(w[0]) * (rm(0, 0) * w[0] + rm(0, 1) * w[1]) +
                 std::conj(w[1]) * (rm(1, 0) * w[0] + rm(1, 1) * w[1]);
    const double p = std::clamp(pc.real(), 0.0, 1.0);
    s_decohered -= xlogx(p);
    if (p > 0.0) {
      if (q == 0.0) {
        kl = kInf;
        continue;
      }
      kl += p * (std::log(p) - std::log(q));
    }
  }

  return CoherenceSplit{kl, s_decohered - von_neumann_entropy(rho0)};
}

}  // namespace qreset
