#include "qreset/efvector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <vector>

namespace qreset {

namespace {

constexpr double kBallRadius = 1.0 - 1e-6;

using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec4 = std::array<double, 4>;

Mat4 probe_matrix(const ProbeSet& ps) {
  Mat4 a{};
  for (int i = 0; i < 4; ++i) {
    a[i] = {2.0, ps.probes[i].a.x, ps.probes[i].a.y, ps.probes[i].a.z};
  }
  return a;
}

// Gauss-Jordan with partial pivoting on [A | I]; returns false (and the
// index of the vanishing pivot row, in original probe order) on singularity.
bool invert4(Mat4 a, Mat4& inv, int& bad_row) {
  std::array<int, 4> perm = {0, 1, 2, 3};
  inv = {};
  for (int i = 0; i < 4; ++i) inv[i][i] = 1.0;

  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-14) {
      bad_row = perm[piv];
      return false;
    }
    std::swap(a[col], a[piv]);
    std::swap(inv[col], inv[piv]);
    std::swap(perm[col], perm[piv]);

    const double d = a[col][col];
    for (int j = 0; j < 4; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 4; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return true;
}

double norm1(const Mat4& a) {
  double best = 0.0;
  for (int j = 0; j < 4; ++j) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += std::abs(a[i][j]);
    best = std::max(best, s);
  }
  return best;
}

BlochVector project_to_ball(BlochVector v) {
  const double n = v.norm();
  if (n > kBallRadius) v = (kBallRadius / n) * v;
  return v;
}

struct Vertex {
  BlochVector x;
  double f;
};

double simplex_diameter(const std::array<Vertex, 4>& s) {
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) d = std::max(d, bloch_distance(s[i].x, s[j].x));
  return d;
}

struct NmRun {
  Vertex best;
  bool converged;
};

NmRun nelder_mead(const std::function<double(const BlochVector&)>& f, const BlochVector& start,
                  double step, double tol, int max_iter) {
  std::array<Vertex, 4> s;
  s[0] = {project_to_ball(start), 0.0};
  s[0].f = f(s[0].x);
  const std::array<BlochVector, 3> axes = {BlochVector{1, 0, 0}, BlochVector{0, 1, 0},
                                           BlochVector{0, 0, 1}};
  for (int i = 0; i < 3; ++i) {
    s[i + 1].x = project_to_ball(s[0].x + step * axes[i]);
    s[i + 1].f = f(s[i + 1].x);
  }

  auto order = [&] { std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) {
                       return a.f < b.f;
                     }); };
  order();

  for (int it = 0; it < max_iter; ++it) {
    if (simplex_diameter(s) < tol) return NmRun{s[0], true};

    const BlochVector centroid = (1.0 / 3.0) * (s[0].x + s[1].x + s[2].x);
    const BlochVector refl = project_to_ball(centroid + (centroid - s[3].x));
    const double f_refl = f(refl);

    if (f_refl < s[0].f) {
      const BlochVector exp_pt = project_to_ball(centroid + 2.0 * (centroid - s[3].x));
      const double f_exp = f(exp_pt);
      s[3] = f_exp < f_refl ? Vertex{exp_pt, f_exp} : Vertex{refl, f_refl};
    } else if (f_refl < s[2].f) {
      s[3] = Vertex{refl, f_refl};
    } else {
      const BlochVector con = project_to_ball(centroid + 0.5 * (s[3].x - centroid));
      const double f_con = f(con);
      if (f_con < s[3].f) {
        s[3] = Vertex{con, f_con};
      } else {
        for (int i = 1; i < 4; ++i) {  // shrink toward the best vertex
          s[i].x = project_to_ball(s[0].x + 0.5 * (s[i].x - s[0].x));
          s[i].f = f(s[i].x);
        }
      }
    }
    order();
  }
  return NmRun{s[0], false};
}

// Orthonormal frame adapted to the EP landscape: the radial direction (steep
// when the minimum is near the sphere) plus two tangentials.
std::array<BlochVector, 3> frame_at(const BlochVector& x) {
  const double n = x.norm();
  if (n < 1e-9)
    return {BlochVector{1, 0, 0}, BlochVector{0, 1, 0}, BlochVector{0, 0, 1}};
  const BlochVector r = (1.0 / n) * x;
  const BlochVector seed = std::abs(r.x) < 0.9 ? BlochVector{1, 0, 0} : BlochVector{0, 1, 0};
  BlochVector t1{r.y * seed.z - r.z * seed.y, r.z * seed.x - r.x * seed.z,
                 r.x * seed.y - r.y * seed.x};
  t1 = (1.0 / t1.norm()) * t1;
  const BlochVector t2{r.y * t1.z - r.z * t1.y, r.z * t1.x - r.x * t1.z,
                       r.x * t1.y - r.y * t1.x};
  return {r, t1, t2};
}

// Successive-parabolic line searches along the adapted frame with a
// shrinking probe step. Refines the Nelder-Mead output down to the
// function-value noise floor, which matters when the radial curvature is
// ~1/(1-a^2).
Vertex polish(const std::function<double(const BlochVector&)>& f, Vertex v) {
  double h = 1e-3;
  const double h_floor = 3e-8;
  for (int pass = 0; pass < 24; ++pass) {
    const auto dirs = frame_at(v.x);
    for (const BlochVector& d : dirs) {
      for (int walk = 0; walk < 16; ++walk) {
        const BlochVector xp = project_to_ball(v.x + h * d);
        const BlochVector xm = project_to_ball(v.x + (-h) * d);
        const double fp = f(xp);
        const double fm = f(xm);
        if (fp < v.f && fp <= fm) {
          v = Vertex{xp, fp};
          continue;
        }
        if (fm < v.f) {
          v = Vertex{xm, fm};
          continue;
        }
        const double denom = fp - 2.0 * v.f + fm;
        if (denom > 0.0) {
          const double s = 0.5 * h * (fm - fp) / denom;
          const BlochVector xs = project_to_ball(v.x + s * d);
          const double fs = f(xs);
          if (fs < v.f) v = Vertex{xs, fs};
        }
        break;
      }
    }
    if (h <= h_floor) break;
    h = std::max(h * 0.25, h_floor);
  }
  return v;
}

}  // namespace

ProbeSet default_probe_bloch() {
  return ProbeSet{{Probe{{0, 0, 0}, 0.0}, Probe{{1, 0, 0}, 0.0}, Probe{{0, 1, 0}, 0.0},
                   Probe{{0, 0, 1}, 0.0}}};
}

double probe_condition_number(const ProbeSet& probes) {
  const Mat4 a = probe_matrix(probes);
  Mat4 inv;
  int bad = -1;
  if (!invert4(a, inv, bad)) return std::numeric_limits<double>::infinity();
  return norm1(a) * norm1(inv);
}

EntropyFlowVector infer_ef_vector(const ProbeSet& probes) {
  const Mat4 a = probe_matrix(probes);
  Mat4 inv;
  int bad = -1;
  if (!invert4(a, inv, bad))
    throw LinearDependenceError("probe " + std::to_string(bad) +
                                " is linearly dependent on the others; choose four linearly "
                                "independent initial states");
  const double cond = norm1(a) * norm1(inv);
  if (cond >= 1e8)
    throw LinearDependenceError("probe matrix condition number " + std::to_string(cond) +
                                " exceeds 1e8; probes are too close to linearly dependent");

  Vec4 rhs{};
  for (int i = 0; i < 4; ++i) rhs[i] = 2.0 * probes.probes[i].ef;
  Vec4 sol{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sol[i] += inv[i][j] * rhs[j];

  EntropyFlowVector v;
  v.ef_mixed = sol[0];
  v.phi = {sol[1], sol[2], sol[3]};
  v.phi_norm = std::sqrt(sol[1] * sol[1] + sol[2] * sol[2] + sol[3] * sol[3]);
  return v;
}

double predict_ef(const EntropyFlowVector& v, const BlochVector& a) {
  return v.ef_mixed + 0.5 * (a.x * v.phi[0] + a.y * v.phi[1] + a.z * v.phi[2]);
}

double ep_analytic(const EntropyFlowVector& v, const BlochVector& a, double s_target) {
  const double n = a.norm();
  if (n > 1.0 + 1e-9) throw InvalidState("Bloch vector norm exceeds 1");
  return predict_ef(v, a) + s_target - entropy_of_bloch_norm(std::min(n, 1.0));
}

BlochVector minimally_dissipative_state(const EntropyFlowVector& v) {
  if (v.phi_norm < 1e-300) return BlochVector{0, 0, 0};
  const double scale = -std::tanh(0.5 * v.phi_norm) / v.phi_norm;
  // + 0.0 normalizes the -0.0 that scale * 0.0 would leave in output files.
  return BlochVector{scale * v.phi[0] + 0.0, scale * v.phi[1] + 0.0, scale * v.phi[2] + 0.0};
}

BlochVector minimize_ep_numeric(const std::function<double(const BlochVector&)>& ep, double tol,
                                int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");

  // 8 symmetric interior starts: the corners of a cube at radius 1/2.
  const double s = 0.5 / std::sqrt(3.0);
  std::vector<BlochVector> starts;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) starts.push_back(BlochVector{sx * s, sy * s, sz * s});

  const double nm_tol = std::max(tol, 1e-5);
  std::vector<std::future<NmRun>> futures;
  futures.reserve(starts.size());
  for (const BlochVector& x0 : starts)
    futures.push_back(std::async(std::launch::async, [&ep, x0, nm_tol, max_iter] {
      return nelder_mead(ep, x0, 0.15, nm_tol, max_iter);
    }));

  bool any_converged = false;
  Vertex best{BlochVector{0, 0, 0}, std::numeric_limits<double>::infinity()};
  for (auto& fut : futures) {  // ties resolved by start order: deterministic
    const NmRun run = fut.get();
    any_converged = any_converged || run.converged;
    if (run.best.f < best.f) best = run.best;
  }

  if (!any_converged)
    throw ConvergenceError("simplex descent did not converge from any start", best.x, best.f);

  return polish(ep, best).x;
}

BlochVector minimize_ep_numeric(const ProtocolSchedule& schedule, const LindbladConfig& cfg,
                                double tol) {
  auto objective = [&](const BlochVector& a) {
    return trajectory_ep(evolve(bloch_to_density(a), schedule, cfg));
  };
  return minimize_ep_numeric(objective, tol);
}

double trajectory_ep(const Trajectory& traj) {
  return traj.final_heat() + traj.final_entropy() - traj.initial_entropy();
}

EntropyFlowVector infer_ef_vector_simulated(const ProtocolSchedule& schedule,
                                            const LindbladConfig& cfg) {
  ProbeSet ps = default_probe_bloch();
  for (Probe& p : ps.probes) {
    const Trajectory traj = evolve(bloch_to_density(p.a), schedule, cfg);
    p.ef = traj.final_heat();  // EF = Q/T, and heat is stored in k_B T units
  }
  return infer_ef_vector(ps);
}

}  // namespace qreset
