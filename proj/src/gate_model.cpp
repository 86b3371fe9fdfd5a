// Copyright 2026 The lasiq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lasiq/gate_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace lasiq {

namespace {

using Mat = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using Cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kMhzToRadNs = 2.0 * kPi * 1e-3;  // MHz -> rad/ns
constexpr Cplx kI{0.0, 1.0};

MatR lowering_op(int levels) {
    MatR a = MatR::Zero(levels, levels);
    for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

MatR kron(const MatR& a, const MatR& b) {
    MatR out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Eigensystem of H0 with eigenstates labeled by their dominant bare
/// component; carries the computational-subspace data every gate-model
/// operation needs.
struct DressedFrame {
    int levels = 0;
    int dim = 0;
    MatR h0_mhz;
    Eigen::VectorXd evals;         // MHz, solver order
    MatR evecs;                    // columns, sign-fixed to positive overlap
    std::vector<int> eig_of_bare;  // bare index -> eigenvector column
    double e00, e01, e10, e11;     // computational energies (MHz)
    bool flagged = false;          // ambiguous identification (collision)
    MatR comp;                     // dim x 4 dressed computational vectors

    int bare_index(int nc, int nt) const { return nc * levels + nt; }

    explicit DressedFrame(const TransmonPair& pair) {
        pair.validate();
        levels = pair.levels;
        dim = pair.dim();
        h0_mhz = build_hamiltonian(pair);
        Eigen::SelfAdjointEigenSolver<MatR> solver(h0_mhz);
        evals = solver.eigenvalues();
        evecs = solver.eigenvectors();

        // Greedy max-overlap assignment of eigenvectors to bare labels.
        struct Overlap {
            double weight;
            int bare, eig;
        };
        std::vector<Overlap> overlaps;
        overlaps.reserve(static_cast<std::size_t>(dim) * dim);
        for (int b = 0; b < dim; ++b)
            for (int e = 0; e < dim; ++e)
                overlaps.push_back({evecs(b, e) * evecs(b, e), b, e});
        std::stable_sort(overlaps.begin(), overlaps.end(),
                         [](const Overlap& x, const Overlap& y) {
                             return x.weight > y.weight;
                         });
        eig_of_bare.assign(dim, -1);
        std::vector<int> bare_of_eig(dim, -1);
        std::vector<double> weight_of_bare(dim, 0.0);
        for (const auto& o : overlaps) {
            if (eig_of_bare[o.bare] >= 0 || bare_of_eig[o.eig] >= 0) continue;
            eig_of_bare[o.bare] = o.eig;
            bare_of_eig[o.eig] = o.bare;
            weight_of_bare[o.bare] = o.weight;
        }

        const std::array<int, 4> comp_bare = {bare_index(0, 0), bare_index(0, 1),
                                              bare_index(1, 0), bare_index(1, 1)};
        comp = MatR::Zero(dim, 4);
        for (int k = 0; k < 4; ++k) {
            const int b = comp_bare[k];
            const int e = eig_of_bare[b];
            Eigen::VectorXd v = evecs.col(e);
            if (v(b) < 0) v = -v;
            comp.col(k) = v;
            if (weight_of_bare[b] < 0.6) flagged = true;
        }
        e00 = evals(eig_of_bare[comp_bare[0]]);
        e01 = evals(eig_of_bare[comp_bare[1]]);
        e10 = evals(eig_of_bare[comp_bare[2]]);
        e11 = evals(eig_of_bare[comp_bare[3]]);
    }

    double dressed_target_f01() const { return e01 - e00; }

    /// Ideal instantaneous pi pulse on the control in the dressed basis:
    /// swaps |0t> <-> |1t| on the computational subspace, identity elsewhere.
    MatR control_pi() const {
        MatR x = MatR::Identity(dim, dim);
        const auto v = [&](int k) { return comp.col(k); };
        x -= v(0) * v(0).transpose() + v(1) * v(1).transpose() +
             v(2) * v(2).transpose() + v(3) * v(3).transpose();
        x += v(2) * v(0).transpose() + v(0) * v(2).transpose() +
             v(3) * v(1).transpose() + v(1) * v(3).transpose();
        return x;
    }
};

/// Flat-top envelope with Gaussian rise/fall (2 sigma = rise), truncated
/// and rescaled to start and end exactly at zero.
struct GaussianSquare {
    double duration_ns;
    double rise_ns;

    double at(double t) const {
        if (t <= 0.0 || t >= duration_ns) return 0.0;
        if (rise_ns <= 0.0) return 1.0;
        const double sigma = rise_ns / 2.0;
        const double g0 = std::exp(-2.0);  // edge value before rescale
        auto edge = [&](double x) {
            const double g = std::exp(-0.5 * ((x - rise_ns) / sigma) * ((x - rise_ns) / sigma));
            return (g - g0) / (1.0 - g0);
        };
        if (t < rise_ns) return edge(t);
        if (t > duration_ns - rise_ns) return edge(duration_ns - t);
        return 1.0;
    }
};

struct DriveTerm {
    const Mat* op;          // drive operator, rad/ns scale applied via amp
    double amp_rad_ns;      // peak angular amplitude
    GaussianSquare env;
};

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Adaptive Dormand-Prince 5(4) for i dU/dt = H(t) U. The local error is
/// budgeted per unit time so the accumulated defect stays near tol.
Mat rk45_schrodinger(const Mat& h_static, const std::vector<DriveTerm>& drives,
                     double duration_ns, double tol) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640,
                        e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                        e7 = -1.0 / 40;

    const int d = static_cast<int>(h_static.rows());
    Mat u = Mat::Identity(d, d);
    Mat h(d, d), k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d);
    Mat utmp(d, d), u5(d, d), err(d, d);

    auto deriv = [&](double t, const Mat& state, Mat& out) {
        h = h_static;
        for (const auto& dr : drives) h += (dr.amp_rad_ns * dr.env.at(t)) * (*dr.op);
        out.noalias() = (-kI) * (h * state);
    };

    double t = 0.0;
    double dt = std::min(1.0, duration_ns / 16.0);
    const double dt_min = duration_ns * 1e-10;
    int guard = 0;
    while (t < duration_ns) {
        if (++guard > 2000000) throw SolverError("adaptive stepper failed to advance");
        dt = std::min(dt, duration_ns - t);
        if (dt < dt_min) throw SolverError("step-size underflow in unitary propagation");

        deriv(t, u, k1);
        utmp = u + dt * (a21 * k1);
        deriv(t + c2 * dt, utmp, k2);
        utmp = u + dt * (a31 * k1 + a32 * k2);
        deriv(t + c3 * dt, utmp, k3);
        utmp = u + dt * (a41 * k1 + a42 * k2 + a43 * k3);
        deriv(t + c4 * dt, utmp, k4);
        utmp = u + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        deriv(t + c5 * dt, utmp, k5);
        utmp = u + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        deriv(t + dt, utmp, k6);
        u5 = u + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        deriv(t + dt, u5, k7);
        err = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double err_norm = err.cwiseAbs().maxCoeff();
        const double budget = tol * dt / duration_ns;
        if (err_norm <= budget || dt <= dt_min * 2) {
            t += dt;
            u.swap(u5);
        }
        const double scale =
            err_norm > 0 ? 0.9 * std::pow(budget / err_norm, 0.2) : 5.0;
        dt *= std::clamp(scale, 0.2, 5.0);
    }
    return u;
}

Mat to_complex(const MatR& m) { return m.cast<Cplx>(); }

/// exp(-i H tau) for real-symmetric H via eigendecomposition.
Mat expm_i(const MatR& h, double tau) {
    Eigen::SelfAdjointEigenSolver<MatR> solver(h);
    Eigen::VectorXcd phases(solver.eigenvalues().size());
    for (int i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(-kI * (solver.eigenvalues()(i) * tau));
    return solver.eigenvectors().cast<Cplx>() * phases.asDiagonal() *
           solver.eigenvectors().transpose().cast<Cplx>();
}

/// Rotation generator data shared by one propagation call.
struct PulseContext {
    DressedFrame frame;
    MatR h_rot_mhz;     // rotating-frame static part, MHz
    Mat h_static_rad;   // same in rad/ns
    Mat xc, xt;         // (a + a^dag) on control / target
    MatR xc_r, xt_r;
    Eigen::VectorXd rot_evals;  // eigensystem of h_rot_mhz for frame factors
    MatR rot_evecs;

    PulseContext(const TransmonPair& pair) : frame(pair) {
        const MatR a = lowering_op(pair.levels);
        const MatR id = MatR::Identity(pair.levels, pair.levels);
        const MatR n_op = a.transpose() * a;
        const MatR n_total = kron(n_op, id) + kron(id, n_op);
        h_rot_mhz = frame.h0_mhz - frame.dressed_target_f01() * n_total;
        h_static_rad = to_complex(kMhzToRadNs * h_rot_mhz);
        xc_r = kron(a + a.transpose(), id);
        xt_r = kron(id, a + a.transpose());
        xc = to_complex(xc_r);
        xt = to_complex(xt_r);
        Eigen::SelfAdjointEigenSolver<MatR> solver(h_rot_mhz);
        rot_evals = solver.eigenvalues();
        rot_evecs = solver.eigenvectors();
    }

    /// exp(+i (H0 - w_d N) T): converts the rotating-frame propagator into
    /// the interaction frame of H0, where an idle pulse is the identity.
    Mat frame_factor(double duration_ns) const {
        Eigen::VectorXcd phases(rot_evals.size());
        for (int i = 0; i < phases.size(); ++i)
            phases(i) = std::exp(kI * (kMhzToRadNs * rot_evals(i) * duration_ns));
        return rot_evecs.cast<Cplx>() * phases.asDiagonal() *
               rot_evecs.transpose().cast<Cplx>();
    }

    /// One Gaussian-square segment. The flat top is a constant Hamiltonian,
    /// so it propagates by one exact matrix exponential; only the rise and
    /// fall edges are stepped adaptively.
    Mat segment(double duration_ns, double rise_ns, double amp_rad, double rot_rad,
                double tol) const {
        if (amp_rad == 0.0 && rot_rad == 0.0)
            return expm_i(kMhzToRadNs * h_rot_mhz, duration_ns);
        const GaussianSquare env{duration_ns, rise_ns};
        const std::vector<DriveTerm> drives = {{&xc, amp_rad, env}, {&xt, rot_rad, env}};
        if (rise_ns <= 0.0) {
            const MatR h_flat = kMhzToRadNs * h_rot_mhz + amp_rad * xc_r + rot_rad * xt_r;
            return expm_i(h_flat, duration_ns);
        }
        const Mat u_rise = rk45_schrodinger(h_static_rad, drives, 0.0, rise_ns, tol / 2.0);
        const MatR h_flat = kMhzToRadNs * h_rot_mhz + amp_rad * xc_r + rot_rad * xt_r;
        const Mat u_flat = expm_i(h_flat, duration_ns - 2.0 * rise_ns);
        const Mat u_fall = rk45_schrodinger(h_static_rad, drives,
                                            duration_ns - rise_ns, duration_ns, tol / 2.0);
        return u_fall * (u_flat * u_rise);
    }

    Mat propagate(const CRPulseSpec& spec, double tol) const {
        spec.validate();
        const double amp = kMhzToRadNs * spec.amplitude_mhz / 2.0;
        const double rot = kMhzToRadNs * spec.rotary_amplitude_mhz / 2.0;
        Mat u_rot;
        if (spec.echo) {
            const double seg = spec.gate_time_ns / 2.0;
            const Mat u1 = segment(seg, spec.rise_fall_ns, amp, rot, tol / 2.0);
            const Mat u2 = segment(seg, spec.rise_fall_ns, -amp, -rot, tol / 2.0);
            const Mat pi_c = to_complex(frame.control_pi());
            u_rot = pi_c * u2 * pi_c * u1;
        } else {
            u_rot = segment(spec.gate_time_ns, spec.rise_fall_ns, amp, rot, tol);
        }
        return frame_factor(spec.gate_time_ns) * u_rot;
    }

    Eigen::Matrix4cd project(const Mat& u) const {
        return frame.comp.cast<Cplx>().adjoint() * u * frame.comp.cast<Cplx>();
    }
};

/// Signed rotation angle of the X component of a (near-)SU(2) block.
double signed_x_angle(const Eigen::Matrix2cd& r) {
    const Cplx u = 0.5 * (r(0, 0) + r(1, 1));
    const Cplx vx = 0.5 * (r(0, 1) + r(1, 0));
    const double num = std::real(kI * vx * std::conj(u));
    return 2.0 * std::atan2(num, std::norm(u));
}

double zx_angle(const Eigen::Matrix4cd& u4) {
    const double th0 = signed_x_angle(u4.block<2, 2>(0, 0));
    const double th1 = signed_x_angle(u4.block<2, 2>(2, 2));
    return 0.5 * (th0 - th1);
}

Eigen::Matrix4cd zx_target() {
    Eigen::Matrix4cd zx = Eigen::Matrix4cd::Zero();
    zx(0, 1) = zx(1, 0) = 1.0;
    zx(2, 3) = zx(3, 2) = -1.0;
    const double c = std::cos(kPi / 4.0), s = std::sin(kPi / 4.0);
    return c * Eigen::Matrix4cd::Identity() - kI * s * zx;
}

/// max_phases |Tr(U_target^dag Zpost U Zpre)| with independent Z phases on
/// both qubits, pre and post. Coordinate ascent over the four combined
/// phases; each 1-D slice is |A e^-ix + B e^ix + C| maximized by sampling
/// plus golden-section refinement.
double best_overlap_trace(const Eigen::Matrix4cd& u_proj) {
    const Eigen::Matrix4cd ut = zx_target();
    Eigen::Matrix4cd c;
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) c(k, l) = std::conj(ut(k, l)) * u_proj(k, l);

    // Phase exponents per basis index for (sum, diff) parametrization.
    static const double sgn[4] = {-1.0, -1.0, 1.0, 1.0};   // x or w coefficient
    static const double sgn2[4] = {-1.0, 1.0, -1.0, 1.0};  // y or z coefficient

    auto trace_at = [&](const std::array<double, 4>& ph) {
        const double x = ph[0], y = ph[1], w = ph[2], z = ph[3];
        Cplx total = 0.0;
        for (int k = 0; k < 4; ++k) {
            const Cplx post = std::exp(kI * (sgn[k] * x + sgn2[k] * y));
            for (int l = 0; l < 4; ++l) {
                const Cplx pre = std::exp(kI * (sgn[l] * w + sgn2[l] * z));
                total += c(k, l) * post * pre;
            }
        }
        return std::abs(total);
    };

    double best = 0.0;
    for (int start = 0; start < 2; ++start) {
        std::array<double, 4> ph = {0.0, 0.0, 0.0, 0.0};
        if (start == 1) ph = {kPi / 3, kPi / 7, kPi / 5, kPi / 11};
        for (int round = 0; round < 8; ++round) {
            for (int coord = 0; coord < 4; ++coord) {
                double best_v = -1.0, best_p = ph[coord];
                for (int s = 0; s < 64; ++s) {
                    const double cand = s * (2.0 * kPi / 64.0);
                    auto probe = ph;
                    probe[coord] = cand;
                    const double v = trace_at(probe);
                    if (v > best_v) {
                        best_v = v;
                        best_p = cand;
                    }
                }
                double lo = best_p - 2.0 * kPi / 64.0, hi = best_p + 2.0 * kPi / 64.0;
                for (int it = 0; it < 40; ++it) {
                    const double m1 = lo + (hi - lo) * 0.381966;
                    const double m2 = hi - (hi - lo) * 0.381966;
                    auto p1 = ph, p2 = ph;
                    p1[coord] = m1;
                    p2[coord] = m2;
                    if (trace_at(p1) < trace_at(p2))
                        lo = m1;
                    else
                        hi = m2;
                }
                ph[coord] = 0.5 * (lo + hi);
            }
        }
        best = std::max(best, trace_at(ph));
    }
    return best;
}

}  // namespace

void TransmonPair::validate() const {
    if (levels < 3)
        throw std::invalid_argument("levels must be >= 3 to capture |2> physics");
    if (!(f_c_mhz > 0) || !(f_t_mhz > 0))
        throw std::invalid_argument("qubit frequencies must be positive");
    if (!(delta_c_mhz < 0) || !(delta_t_mhz < 0))
        throw std::invalid_argument("anharmonicities must be negative");
    if (j_mhz < 0) throw std::invalid_argument("j_coupling must be >= 0");
}

void CRPulseSpec::validate() const {
    if (!(gate_time_ns > 0)) throw std::invalid_argument("gate_time must be positive");
    if (rise_fall_ns < 0 || gate_time_ns <= 2.0 * rise_fall_ns)
        throw std::invalid_argument("gate_time must exceed twice the rise/fall");
    if (amplitude_mhz < 0 || rotary_amplitude_mhz < 0)
        throw std::invalid_argument("pulse amplitudes must be >= 0");
}

Eigen::MatrixXd build_hamiltonian(const TransmonPair& pair) {
    pair.validate();
    const int levels = pair.levels;
    const MatR a = lowering_op(levels);
    const MatR id = MatR::Identity(levels, levels);
    const MatR n_op = a.transpose() * a;

    MatR duff_c = MatR::Zero(levels, levels);
    MatR duff_t = MatR::Zero(levels, levels);
    for (int n = 0; n < levels; ++n) {
        duff_c(n, n) = pair.f_c_mhz * n + 0.5 * pair.delta_c_mhz * n * (n - 1);
        duff_t(n, n) = pair.f_t_mhz * n + 0.5 * pair.delta_t_mhz * n * (n - 1);
    }
    MatR h = kron(duff_c, id) + kron(id, duff_t);
    h += pair.j_mhz * (kron(a.transpose(), a) + kron(a, a.transpose()));
    return h;
}

ZZResult static_zz(const TransmonPair& pair) {
    const DressedFrame frame(pair);
    const double zeta_mhz = frame.e11 - frame.e10 - frame.e01 + frame.e00;
    return {zeta_mhz * 1000.0, frame.flagged};
}

double static_zz_perturbative(const TransmonPair& pair) {
    pair.validate();
    const double detuning = pair.f_c_mhz - pair.f_t_mhz;
    const double da = detuning + pair.delta_c_mhz;
    const double db = detuning - pair.delta_t_mhz;
    if (std::abs(da) < 1.0 || std::abs(db) < 1.0)
        throw std::invalid_argument(
            "perturbative ZZ evaluated at a pole (type-2/3 degeneracy)");
    const double zeta_mhz =
        2.0 * pair.j_mhz * pair.j_mhz * (pair.delta_c_mhz + pair.delta_t_mhz) / (da * db);
    return zeta_mhz * 1000.0;
}

Eigen::MatrixXcd propagate_unitary(const TransmonPair& pair, const CRPulseSpec& spec,
                                   double solver_tol) {
    if (!(solver_tol > 0)) throw std::invalid_argument("solver_tol must be positive");
    return PulseContext(pair).propagate(spec, solver_tol);
}

double gate_error(const Eigen::MatrixXcd& u, const TransmonPair& pair) {
    if (u.rows() != pair.dim() || u.cols() != pair.dim())
        throw std::invalid_argument("operator dimension does not match the pair");
    const DressedFrame frame(pair);
    const Eigen::Matrix4cd u_proj =
        frame.comp.cast<Cplx>().adjoint() * u * frame.comp.cast<Cplx>();
    const double overlap = best_overlap_trace(u_proj);
    const double fidelity = (overlap * overlap + 4.0) / 20.0;
    return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

namespace {

CRPulseSpec calibrate_impl(const PulseContext& ctx, double gate_time_ns,
                           double solver_tol, double hint_amp_mhz) {
    if (gate_time_ns < 100.0 || gate_time_ns > 1000.0)
        throw std::invalid_argument("gate_time must be within [100, 1000] ns");
    if (ctx.frame.flagged)
        throw CalibrationError(
            "level identification ambiguous: pair sits inside a collision");

    CRPulseSpec spec;
    spec.gate_time_ns = gate_time_ns;
    spec.echo = true;

    auto angle_at = [&](double amp) {
        CRPulseSpec probe = spec;
        probe.amplitude_mhz = amp;
        return std::abs(zx_angle(ctx.project(ctx.propagate(probe, solver_tol))));
    };

    constexpr double kTargetAngle = kPi / 2.0;
    constexpr double kMaxAmp = 600.0;

    double lo = 0.0, lo_angle = 0.0;
    double hi = -1.0, hi_angle = 0.0;
    if (hint_amp_mhz > 0) {
        const double a0 = 0.75 * hint_amp_mhz, a1 = std::min(1.35 * hint_amp_mhz, kMaxAmp);
        const double th0 = angle_at(a0), th1 = angle_at(a1);
        if (th0 < kTargetAngle && th1 >= kTargetAngle) {
            lo = a0;
            lo_angle = th0;
            hi = a1;
            hi_angle = th1;
        }
    }
    if (hi < 0) {
        double amp = 2.0;
        while (amp <= kMaxAmp) {
            const double th = angle_at(amp);
            if (th >= kTargetAngle) {
                hi = amp;
                hi_angle = th;
                break;
            }
            lo = amp;
            lo_angle = th;
            amp *= 1.6;
        }
        if (hi < 0)
            throw CalibrationError(
                "no drive amplitude within bounds reaches a pi/2 ZX rotation");
    }

    // Secant-accelerated bisection on the bracketed crossing.
    for (int it = 0; it < 60 && (hi - lo) > std::max(1e-4 * hi, 1e-4); ++it) {
        double mid;
        if (hi_angle > lo_angle + 1e-12) {
            mid = lo + (kTargetAngle - lo_angle) * (hi - lo) / (hi_angle - lo_angle);
            mid = std::clamp(mid, lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo));
        } else {
            mid = 0.5 * (lo + hi);
        }
        const double th = angle_at(mid);
        if (th >= kTargetAngle) {
            hi = mid;
            hi_angle = th;
        } else {
            lo = mid;
            lo_angle = th;
        }
    }
    spec.amplitude_mhz = 0.5 * (lo + hi);
    return spec;
}

}  // namespace

CRPulseSpec calibrate_cr_echo(const TransmonPair& pair, double gate_time_ns,
                              double solver_tol) {
    return calibrate_impl(PulseContext(pair), gate_time_ns, solver_tol, 0.0);
}

CRPulseSpec optimize_rotary(const TransmonPair& pair, const CRPulseSpec& spec,
                            double solver_tol) {
    spec.validate();
    const PulseContext ctx(pair);
    auto error_at = [&](double rotary) {
        CRPulseSpec probe = spec;
        probe.rotary_amplitude_mhz = rotary;
        return gate_error(ctx.propagate(probe, solver_tol), pair);
    };

    const double scale = std::max(spec.amplitude_mhz, 1.0);
    double best_r = 0.0;
    double best_e = error_at(0.0);
    for (double mult : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double e = error_at(mult * scale);
        if (e < best_e) {
            best_e = e;
            best_r = mult * scale;
        }
    }
    // Golden-section refine around the best coarse candidate.
    double lo = std::max(0.0, best_r - 0.5 * scale), hi = best_r + 0.5 * scale;
    for (int it = 0; it < 10; ++it) {
        const double m1 = lo + (hi - lo) * 0.381966;
        const double m2 = hi - (hi - lo) * 0.381966;
        if (error_at(m1) < error_at(m2))
            hi = m2;
        else
            lo = m1;
    }
    const double refined = 0.5 * (lo + hi);
    const double refined_e = error_at(refined);
    if (refined_e < best_e) {
        best_e = refined_e;
        best_r = refined;
    }
    CRPulseSpec out = spec;
    out.rotary_amplitude_mhz = best_r;
    return out;
}

GateErrorResult simulate_gate(const TransmonPair& pair, double gate_time_ns,
                              bool optimize_rotary_pulse, double solver_tol) {
    const PulseContext ctx(pair);
    CRPulseSpec spec = calibrate_impl(ctx, gate_time_ns, solver_tol, 0.0);
    if (optimize_rotary_pulse) spec = optimize_rotary(pair, spec, solver_tol);

    GateErrorResult result;
    const Mat u = ctx.propagate(spec, solver_tol);
    result.error = gate_error(u, pair);
    result.zz_khz = static_zz(pair).zz_khz;
    result.calibrated_amplitude_mhz = spec.amplitude_mhz;
    result.unitarity_defect =
        (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    return result;
}

std::vector<SweepPoint> error_vs_detuning_sweep(const TransmonPair& base,
                                                const std::vector<double>& detunings_mhz,
                                                double gate_time_ns, std::uint64_t seed,
                                                double solver_tol) {
    (void)seed;  // reserved; every stage of the sweep is deterministic
    std::vector<SweepPoint> curve;
    curve.reserve(detunings_mhz.size());
    double last_amp = 0.0;
    for (double detuning : detunings_mhz) {
        TransmonPair pair = base;
        pair.f_c_mhz = base.f_t_mhz + detuning;

        SweepPoint point;
        point.detuning_mhz = detuning;
        point.error = std::numeric_limits<double>::quiet_NaN();
        try {
            const PulseContext ctx(pair);
            point.zz_khz = ctx.frame.e11 - ctx.frame.e10 - ctx.frame.e01 + ctx.frame.e00;
            point.zz_khz *= 1000.0;
            if (ctx.frame.flagged) {
                point.status = "zz_flagged";
                curve.push_back(point);
                continue;
            }
            CRPulseSpec spec = calibrate_impl(ctx, gate_time_ns, solver_tol, last_amp);
            spec = optimize_rotary(pair, spec, solver_tol);
            point.amplitude_mhz = spec.amplitude_mhz;
            point.rotary_amplitude_mhz = spec.rotary_amplitude_mhz;
            point.error = gate_error(ctx.propagate(spec, solver_tol), pair);
            point.status = "ok";
            last_amp = spec.amplitude_mhz;
        } catch (const CalibrationError&) {
            point.status = "calibration_failed";
        }
        curve.push_back(point);
    }
    return curve;
}

}  // namespace lasiq
