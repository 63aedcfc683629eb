#pragma once
// Exact 2x2 Hermitian linear algebra plus the information-theoretic
// functionals (entropy, relative entropy, trace distance, coherence split)
// that the rest of the library is built on.
//
// Conventions used throughout: k_B = hbar = 1 and beta = 1/(k_B T) = 1.
// Energies are in units of k_B T, times in units of beta*hbar, entropies in
// nats. 0 ln 0 = 0 everywhere.

#include <array>
#include <complex>
#include <stdexcept>

namespace qreset {

using Complex = std::complex<double>;

/// Raised when a matrix fails the density-matrix invariants
/// (Hermiticity, unit trace, positivity) or a Bloch vector is unphysical.
struct InvalidState : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// --------------------------------------------------------------------------
// Mat2: dense 2x2 complex matrix, row-major, value semantics.
// --------------------------------------------------------------------------

struct Mat2 {
  std::array<Complex, 4> m{};

  Mat2() = default;
  Mat2(Complex a00, Complex a01, Complex a10, Complex a11) : m{a00, a01, a10, a11} {}

  Complex& operator()(int r, int c) { return m[2 * r + c]; }
  const Complex& operator()(int r, int c) const { return m[2 * r + c]; }

  Complex trace() const { return m[0] + m[3]; }
  Mat2 adjoint() const;
  double max_abs() const;
  bool is_hermitian(double tol = 1e-12) const;

  Mat2& operator+=(const Mat2& o);
  Mat2& operator-=(const Mat2& o);
  Mat2& operator*=(Complex s);
};

Mat2 operator+(Mat2 a, const Mat2& b);
Mat2 operator-(Mat2 a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex s, Mat2 a);
Mat2 operator*(Mat2 a, Complex s);
Mat2 operator*(double s, Mat2 a);

Mat2 commutator(const Mat2& a, const Mat2& b);      // [A,B]
Mat2 anticommutator(const Mat2& a, const Mat2& b);  // {A,B}
Mat2 hermitize(const Mat2& a);                      // (A + A^dag)/2

inline const Mat2 kIdentity{1.0, 0.0, 0.0, 1.0};
inline const Mat2 kSigmaX{0.0, 1.0, 1.0, 0.0};
inline const Mat2 kSigmaY{0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0};
inline const Mat2 kSigmaZ{1.0, 0.0, 0.0, -1.0};

// --------------------------------------------------------------------------
// Bloch vectors and qubit states.
// --------------------------------------------------------------------------

/// Dimensionless Bloch vector; |a| <= 1 for physical states.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
};

BlochVector operator+(const BlochVector& a, const BlochVector& b);
BlochVector operator-(const BlochVector& a, const BlochVector& b);
BlochVector operator*(double s, const BlochVector& a);

/// Bloch-space Euclidean distance |a - b|.
double bloch_distance(const BlochVector& a, const BlochVector& b);

/// Density matrix of a qubit: Hermitian, unit trace, positive semidefinite.
/// The invariants are enforced at construction (tolerance 1e-12).
class QubitState {
 public:
  explicit QubitState(const Mat2& density);

  const Mat2& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }
  BlochVector bloch() const;

 private:
  Mat2 m_;
};

/// rho = (I + a.sigma)/2. Norms in (1, 1 + 1e-9] are scaled back onto the
/// unit sphere; anything larger is an error.
QubitState bloch_to_density(const BlochVector& a);

/// a_i = tr(rho sigma_i); exact inverse of bloch_to_density.
BlochVector density_to_bloch(const QubitState& rho);

// --------------------------------------------------------------------------
// Spectral decomposition and entropic functionals.
// --------------------------------------------------------------------------

using Vec2 = std::array<Complex, 2>;

/// Eigensystem of a 2x2 Hermitian matrix: values descending, vectors
/// orthonormal, vectors[i] belongs to values[i].
struct Spectrum2 {
  std::array<double, 2> values;
  std::array<Vec2, 2> vectors;
};

/// Closed-form eigendecomposition. Throws InvalidState on non-Hermitian
/// input. For (near-)degenerate input returns the computational basis.
Spectrum2 eig_hermitian(const Mat2& m);

/// Von Neumann entropy -tr(rho ln rho) in nats, from the eigenvalues.
double von_neumann_entropy(const QubitState& rho);

/// Same entropy as a function of the Bloch-vector length alone:
/// binary entropy of (1 +- a)/2. Used as an independent route.
double entropy_of_bloch_norm(double a);

/// Quantum relative entropy D[rho||sigma] = tr(rho ln rho) - tr(rho ln sigma)
/// in nats. Returns +infinity when supp(rho) is not contained in supp(sigma).
double relative_entropy(const QubitState& rho, const QubitState& sigma);

/// Trace distance (1/2)||rho - sigma||_1, in [0,1]. For qubits this equals
/// half the Euclidean distance between Bloch vectors.
double trace_distance(const QubitState& rho, const QubitState& sigma);

/// Split of D[rho0||alpha0] into the classical KL divergence of the
/// populations in alpha0's eigenbasis plus the relative entropy of
/// coherence on that basis. kl + coherence = D[rho0||alpha0].
struct CoherenceSplit {
  double kl;
  double coherence;
};

/// For degenerate alpha0 (= I/2) the eigenbasis is ambiguous; the
/// computational z-basis is used so results are deterministic.
CoherenceSplit coherence_decomposition(const QubitState& rho0, const QubitState& alpha0);

}  // namespace qreset
