// SPDX-License-Identifier: Apache-2.0
#include "landau/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "landau/parallel.hpp"
#include "landau/quadrature.hpp"

namespace landau {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ipow(double x, int k)
{
    double r = 1;
    for (int i = 0; i < k; ++i)
        r *= x;
    return r;
}

// Map a reference rule on [-1, 1] to [a, b]
template<class F>
void for_mapped(QuadRule const& ref, double a, double b, F&& f)
{
    double const h = 0.5 * (b - a), m = 0.5 * (a + b);
    for (std::size_t i = 0; i < ref.size(); ++i)
        f(m + h * ref.x[i], h * ref.w[i]);
}

double gaussian_norm(int d)
{
    return std::pow(2 * std::numbers::pi, -0.5 * d);
}

void require_dim(int d)
{
    if (d < 3)
        throw std::invalid_argument(
            "coefficients: d must be >= 3 (the drift integral diverges at "
            "d = 2)");
}

}  // namespace

CoefficientScheme CoefficientScheme::refined() const
{
    CoefficientScheme r = *this;
    r.n_psi *= 2;
    r.n_xi *= 2;
    r.n_s *= 2;
    r.n_theta *= 2;
    r.n_r *= 2;
    r.fourier_nodes *= 2;
    r.kappa_order *= 2;
    return r;
}

std::string CoefficientScheme::hash() const
{
    std::ostringstream os;
    os << n_psi << ':' << n_xi << ':' << n_s << ':' << n_theta << ':' << n_r
       << ':' << r_span << ':' << fourier_nodes << ':' << kappa_max << ':'
       << kappa_panels << ':' << kappa_order << ':' << fd_step;
    return os.str();
}

ChordConstants chord_constants(Potential const& phi, double tau,
                               CoefficientScheme const& sc)
{
    int const d = phi.dim();
    double const R = phi.range();
    ChordConstants out;
    if (!(tau > 0))
        return out;

    QuadRule const psi_ref = gauss_legendre(sc.n_psi);
    QuadRule const xi_ref = gauss_legendre(sc.n_xi);
    QuadRule const s_ref = gauss_legendre(std::max(sc.n_s, phi.spec().p + 2));

    auto g1 = [&](double q) { return 2 * phi.profile(1, q); };
    auto g2 = [&](double q) { return 4 * phi.profile(2, q); };

    double alpha = 0, beta = 0, ell = 0;

    // The split between full and window-limited chords moves across xi = h
    // when tau = 2h, which is a kink in rho.
    std::vector<std::pair<double, double>> psi_pieces;
    if (tau < 2 * R)
    {
        double psi_star = std::acos(tau / (2 * R));
        psi_pieces = {{0.0, psi_star}, {psi_star, 0.5 * std::numbers::pi}};
    }
    else
    {
        psi_pieces = {{0.0, 0.5 * std::numbers::pi}};
    }

    for (auto [p0, p1] : psi_pieces)
    {
        for_mapped(psi_ref, p0, p1, [&](double psi, double wpsi) {
            double const rho = R * std::sin(psi);
            double const h = R * std::cos(psi);
            double const wr = wpsi * R * std::cos(psi);
            double const rho_dm2 = ipow(rho, d - 2);

            auto xi_piece = [&](double xa, double xb, bool full_chord) {
                if (!(xb > xa))
                    return;
                for_mapped(xi_ref, xa, xb, [&](double xi, double wxi) {
                    double const r2 = xi * xi + rho * rho;
                    double const G1 = g1(r2), G2 = g2(r2);
                    double const lo = full_chord ? -xi - h : -tau;
                    double Ia = 0, Ib = 0, Ja = 0, Jb = 0;
                    for_mapped(s_ref, lo, 0.0, [&](double s, double ws) {
                        double const y = xi + s;
                        double const g = ws * g1(y * y + rho * rho);
                        Ia += y * g;
                        Ib += g;
                        Ja += -s * (r2 + s * xi) * g;
                        Jb += -s * y * g;
                    });
                    double const w = wr * wxi;
                    alpha += w * rho_dm2 * xi * G1 * Ia;
                    beta += w * rho_dm2 * rho * rho * G1 * Ib;
                    ell += w * rho_dm2 * (xi * G2 * Ja + G1 * Jb);
                });
            };
            double const split = std::min(h, tau - h);
            xi_piece(-h, split, true);
            xi_piece(std::max(-h, tau - h), h, false);
        });
    }

    double const S = sphere_area(d - 1);
    out.alpha = S * alpha;
    out.beta = S * beta / (d - 1);
    out.ell = -S * ell;
    return out;
}

MatrixXd assemble_matrix(VectorXd const& V, double a, double b)
{
    int const d = static_cast<int>(V.size());
    MatrixXd D = b * MatrixXd::Identity(d, d);
    double n = V.norm();
    if (n > 0)
    {
        VectorXd u = V / n;
        D += (a - b) * u * u.transpose();
    }
    return D;
}

VectorXd assemble_vector(VectorXd const& V, double lambda)
{
    double n = V.norm();
    if (n > 0)
        return (lambda / n) * V;
    return VectorXd::Zero(V.size());
}

LandauCoefficients::LandauCoefficients(PotentialSpec spec,
                                       CoefficientScheme scheme)
    : phi_{spec}
    , scheme_{scheme}
    , moment_once_{std::make_shared<std::once_flag>()}
    , fourier_moment_{std::make_shared<double>(0.0)}
{
    require_dim(spec.d);
    inf_ = chord_constants(phi_, kInf, scheme_);
}

RadialCoefficients LandauCoefficients::radial(double speed) const
{
    int const d = dim();
    double const S = speed;
    QuadRule const theta = gauss_legendre(scheme_.n_theta, 0, std::numbers::pi);
    QuadRule const r_ref = gauss_legendre(scheme_.n_r);
    double a = 0, b = 0, lam = 0;
    for (std::size_t it = 0; it < theta.size(); ++it)
    {
        double const mu = std::cos(theta.x[it]);
        double const sn2 = 1 - mu * mu;
        double const wt = theta.w[it] * ipow(std::sin(theta.x[it]), d - 2);
        double const rmax = std::max(0.0, -S * mu) + scheme_.r_span;
        double WD = 0, WL = 0;
        for_mapped(r_ref, 0.0, rmax, [&](double r, double wr) {
            double e = wr * std::exp(-0.5 * (r * r + 2 * r * S * mu + S * S));
            double rk = ipow(r, d - 3);
            WL += rk * e;
            WD += rk * r * e;
        });
        a += wt * WD * (inf_.alpha * mu * mu + inf_.beta * sn2);
        b += wt * WD
             * (inf_.alpha * sn2 / (d - 1)
                + inf_.beta * (1 - sn2 / (d - 1)));
        lam += wt * WL * mu * inf_.ell;
    }
    double const pref = sphere_area(d - 1) * gaussian_norm(d);
    return {speed, pref * a, pref * b, pref * lam};
}

RadialCoefficients
LandauCoefficients::radial_truncation_delta(double speed, double t) const
{
    int const d = dim();
    double const S = speed;
    if (!(t < kInf))
        return {speed, 0, 0, 0};
    if (!(t > 0))
    {
        RadialCoefficients full = radial(speed);
        return {speed, -full.a, -full.b, -full.lambda};
    }
    // Beyond |v| = 2R/t the window covers every chord
    double const rc = std::min(2 * phi_.range() / t, S + scheme_.r_span);
    QuadRule const rr = gauss_legendre(scheme_.n_r, 0.0, rc);
    std::vector<ChordConstants> dk(rr.size());
    for (std::size_t k = 0; k < rr.size(); ++k)
    {
        ChordConstants c = chord_constants(phi_, t * rr.x[k], scheme_);
        dk[k] = {c.alpha - inf_.alpha, c.beta - inf_.beta, c.ell - inf_.ell};
    }
    QuadRule const theta = gauss_legendre(scheme_.n_theta, 0, std::numbers::pi);
    double a = 0, b = 0, lam = 0;
    for (std::size_t it = 0; it < theta.size(); ++it)
    {
        double const mu = std::cos(theta.x[it]);
        double const sn2 = 1 - mu * mu;
        double const wt = theta.w[it] * ipow(std::sin(theta.x[it]), d - 2);
        for (std::size_t k = 0; k < rr.size(); ++k)
        {
            double const r = rr.x[k];
            double e = rr.w[k]
                       * std::exp(-0.5 * (r * r + 2 * r * S * mu + S * S));
            double rk = ipow(r, d - 3);
            double WD = rk * r * e, WL = rk * e;
            a += wt * WD * (dk[k].alpha * mu * mu + dk[k].beta * sn2);
            b += wt * WD
                 * (dk[k].alpha * sn2 / (d - 1)
                    + dk[k].beta * (1 - sn2 / (d - 1)));
            lam += wt * WL * mu * dk[k].ell;
        }
    }
    double const pref = sphere_area(d - 1) * gaussian_norm(d);
    return {speed, pref * a, pref * b, pref * lam};
}

double fourier_moment(PotentialSpec const& spec, CoefficientScheme const& sc,
                      bool parallel)
{
    QuadRule const k = composite_gauss_legendre(sc.kappa_order, 0.0,
                                                sc.kappa_max, sc.kappa_panels);
    std::vector<double> vals(k.size());
    long const n = static_cast<long>(k.size());
    auto body = [&](long i) {
        double ph = fourier_radial(spec, k.x[i], sc.fourier_nodes);
        vals[i] = k.w[i] * ipow(k.x[i], spec.d) * ph * ph;
    };
    if (parallel)
    {
#pragma omp parallel for schedule(dynamic, 16)
        for (long i = 0; i < n; ++i)
            body(i);
    }
    else
    {
        for (long i = 0; i < n; ++i)
            body(i);
    }
    double acc = 0;
    for (double v : vals)
        acc += v;
    return acc;
}

double LandauCoefficients::fourier_moment() const
{
    std::call_once(*moment_once_, [this] {
        *fourier_moment_ = landau::fourier_moment(spec(), scheme_, true);
    });
    return *fourier_moment_;
}

RadialCoefficients LandauCoefficients::radial_fourier(double speed) const
{
    int const d = dim();
    double const J = fourier_moment();
    QuadRule const theta = gauss_legendre(scheme_.n_theta, 0, std::numbers::pi);
    double a = 0, b = 0;
    for (std::size_t it = 0; it < theta.size(); ++it)
    {
        double const mu = std::cos(theta.x[it]);
        double const sn = std::sin(theta.x[it]);
        double const z = speed * mu;
        double const phi1 = std::exp(-0.5 * z * z)
                            / std::sqrt(2 * std::numbers::pi);
        double const w = theta.w[it] * ipow(sn, d - 2) * phi1;
        a += w * mu * mu;
        b += w * sn * sn / (d - 1);
    }
    double const pref = std::numbers::pi * std::pow(2 * std::numbers::pi, -d)
                        * J * sphere_area(d - 1);
    RadialCoefficients out{speed, pref * a, pref * b, 0};
    out.lambda = -out.a * speed;
    return out;
}

MatrixXd LandauCoefficients::D(VectorXd const& V) const
{
    RadialCoefficients rc = radial(V.norm());
    return assemble_matrix(V, rc.a, rc.b);
}

VectorXd LandauCoefficients::Lambda(VectorXd const& V) const
{
    return assemble_vector(V, radial(V.norm()).lambda);
}

TransportCoefficients LandauCoefficients::at(VectorXd const& V) const
{
    RadialCoefficients rc = radial(V.norm());
    TransportCoefficients out;
    out.V = V;
    out.D = assemble_matrix(V, rc.a, rc.b);
    out.Lambda = assemble_vector(V, rc.lambda);
    out.Sigma = sqrt_spd(out.D);
    out.meta.scheme = scheme_;
    return out;
}

MatrixXd landau_D(VectorXd const& V, LandauCoefficients const& lc)
{
    if (V.size() != lc.dim())
        throw std::invalid_argument("landau_D: velocity dimension mismatch");
    return lc.D(V);
}

VectorXd landau_Lambda(VectorXd const& V, LandauCoefficients const& lc)
{
    if (V.size() != lc.dim())
        throw std::invalid_argument(
            "landau_Lambda: velocity dimension mismatch");
    return lc.Lambda(V);
}

MatrixXd landau_D_fourier(VectorXd const& V, LandauCoefficients const& lc)
{
    if (V.size() != lc.dim())
        throw std::invalid_argument(
            "landau_D_fourier: velocity dimension mismatch");
    RadialCoefficients rc = lc.radial_fourier(V.norm());
    return assemble_matrix(V, rc.a, rc.b);
}

TruncatedCoefficients truncated_coeffs(VectorXd const& V, double t,
                                       LandauCoefficients const& lc)
{
    if (t < 0)
        throw std::invalid_argument("truncated_coeffs: t must be >= 0");
    RadialCoefficients full = lc.radial(V.norm());
    RadialCoefficients delta = lc.radial_truncation_delta(V.norm(), t);
    TruncatedCoefficients out;
    out.dD = assemble_matrix(V, delta.a, delta.b);
    out.dLambda = assemble_vector(V, delta.lambda);
    if (t == 0)
    {
        int const d = static_cast<int>(V.size());
        out.D = MatrixXd::Zero(d, d);
        out.Lambda = VectorXd::Zero(d);
    }
    else
    {
        out.D = assemble_matrix(V, full.a, full.b) + out.dD;
        out.Lambda = assemble_vector(V, full.lambda) + out.dLambda;
    }
    return out;
}

VectorXd jacobi_eigen(MatrixXd const& M, MatrixXd& vectors)
{
    int const n = static_cast<int>(M.rows());
    MatrixXd A = M;
    vectors = MatrixXd::Identity(n, n);
    double const scale = std::max(A.norm(), std::numeric_limits<double>::min());
    for (int sweep = 0; sweep < 100; ++sweep)
    {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += A(p, q) * A(p, q);
        if (std::sqrt(off) <= 1e-17 * scale)
            break;
        for (int p = 0; p < n; ++p)
        {
            for (int q = p + 1; q < n; ++q)
            {
                double const apq = A(p, q);
                if (apq == 0)
                    continue;
                double const theta = (A(q, q) - A(p, p)) / (2 * apq);
                double const t = (theta >= 0 ? 1.0 : -1.0)
                                 / (std::abs(theta)
                                    + std::sqrt(theta * theta + 1));
                double const c = 1 / std::sqrt(t * t + 1);
                double const s = t * c;
                for (int k = 0; k < n; ++k)
                {
                    double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k)
                {
                    double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k)
                {
                    double vkp = vectors(k, p), vkq = vectors(k, q);
                    vectors(k, p) = c * vkp - s * vkq;
                    vectors(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    return A.diagonal();
}

MatrixXd sqrt_spd(MatrixXd const& M)
{
    if (M.rows() != M.cols())
        throw std::invalid_argument("sqrt_spd: matrix must be square");
    double const scale = std::max(M.norm(), 1e-300);
    if ((M - M.transpose()).norm() > 1e-9 * scale)
        throw std::invalid_argument("sqrt_spd: matrix is not symmetric");
    MatrixXd Q;
    VectorXd ev = jacobi_eigen(0.5 * (M + M.transpose()), Q);
    for (int i = 0; i < ev.size(); ++i)
    {
        if (ev[i] < -1e-10)
            throw std::invalid_argument(
                "sqrt_spd: eigenvalue below -1e-10");
        ev[i] = std::sqrt(std::max(ev[i], 0.0));
    }
    MatrixXd S = Q * ev.asDiagonal() * Q.transpose();
    return 0.5 * (S + S.transpose());
}

double generator_apply(TransportCoefficients const& c, VectorXd const& grad_f,
                       MatrixXd const& hess_f)
{
    return 2 * grad_f.dot(c.Lambda) + (hess_f.array() * c.D.array()).sum();
}

VectorXd divergence_fd(VectorXd const& V, LandauCoefficients const& lc,
                       double h)
{
    int const d = static_cast<int>(V.size());
    auto central = [&](double step) {
        VectorXd div = VectorXd::Zero(d);
        for (int j = 0; j < d; ++j)
        {
            VectorXd vp = V, vm = V;
            vp[j] += step;
            vm[j] -= step;
            MatrixXd dp = lc.D(vp), dm = lc.D(vm);
            div += (dp.col(j) - dm.col(j)) / (2 * step);
        }
        return div;
    };
    VectorXd coarse = central(h);
    VectorXd fine = central(0.5 * h);
    return (4 * fine - coarse) / 3;
}

IdentityReport check_identities(std::vector<VectorXd> const& grid,
                                LandauCoefficients const& lc,
                                IdentityTolerances const& tol,
                                bool with_fourier)
{
    IdentityReport rep;
    rep.points.resize(grid.size());
    if (with_fourier)
        lc.fourier_moment();
    long const n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i)
    {
        VectorXd const& V = grid[i];
        IdentityPoint pt;
        pt.V = V;
        RadialCoefficients rc = lc.radial(V.norm());
        MatrixXd D = assemble_matrix(V, rc.a, rc.b);
        VectorXd L = assemble_vector(V, rc.lambda);
        VectorXd DV = D * V;
        pt.drift_error = (L + DV).norm() / (DV.norm() + 1e-12);
        VectorXd div = divergence_fd(V, lc, lc.scheme().fd_step);
        pt.divergence_error = (L - div).norm() / (L.norm() + 1e-12);
        if (with_fourier)
        {
            RadialCoefficients rf = lc.radial_fourier(V.norm());
            MatrixXd DF = assemble_matrix(V, rf.a, rf.b);
            pt.fourier_error = (DF - D).norm() / D.norm();
        }
        pt.symmetry_error = (D - D.transpose()).norm();
        MatrixXd Q;
        pt.min_eigenvalue = jacobi_eigen(D, Q).minCoeff();
        rep.points[i] = pt;
    }
    rep.min_eigenvalue = std::numeric_limits<double>::infinity();
    double max_sym = 0;
    for (auto const& pt : rep.points)
    {
        rep.max_drift_error = std::max(rep.max_drift_error, pt.drift_error);
        rep.max_divergence_error
            = std::max(rep.max_divergence_error, pt.divergence_error);
        rep.max_fourier_error
            = std::max(rep.max_fourier_error, pt.fourier_error);
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, pt.min_eigenvalue);
        max_sym = std::max(max_sym, pt.symmetry_error);
    }
    rep.drift_pass = rep.max_drift_error <= tol.drift_relative;
    rep.divergence_pass = rep.max_divergence_error <= tol.divergence_relative;
    rep.fourier_pass = !with_fourier
                       || rep.max_fourier_error <= tol.fourier_relative;
    rep.spd_pass = rep.min_eigenvalue > 0 && max_sym <= 1e-12;
    return rep;
}

FullTensorResult landau_full_tensor(VectorXd const& V,
                                    PotentialSpec const& spec,
                                    FullTensorScheme const& sc)
{
    require_dim(spec.d);
    Potential phi(spec);
    int const d = spec.d;
    double const R = spec.R;
    if (V.size() != d)
        throw std::invalid_argument("landau_full_tensor: dimension mismatch");

    // Ball nodes with cached gradient and Hessian
    SphereRule const xs = hypersphere_rule(d, sc.x_polar, sc.x_azimuth);
    QuadRule const xr = gauss_legendre(sc.x_radial, 0.0, R);
    std::vector<double> xp, xw, xg, xh;
    for (std::size_t ir = 0; ir < xr.size(); ++ir)
    {
        double const r = xr.x[ir];
        for (std::size_t ia = 0; ia < xs.size(); ++ia)
        {
            std::vector<double> x(d), g(d), h(d * d);
            for (int k = 0; k < d; ++k)
                x[k] = r * xs.point(ia)[k];
            phi.gradient(x.data(), g.data());
            phi.hessian(x.data(), h.data());
            xp.insert(xp.end(), x.begin(), x.end());
            xg.insert(xg.end(), g.begin(), g.end());
            xh.insert(xh.end(), h.begin(), h.end());
            xw.push_back(xr.w[ir] * ipow(r, d - 1) * xs.w[ia]);
        }
    }
    std::size_t const nx = xw.size();

    SphereRule const ws = hypersphere_rule(d, sc.w_polar, sc.w_azimuth);
    QuadRule const s_ref = gauss_legendre(std::max(sc.n_s, spec.p + 2));
    QuadRule const r_ref = gauss_legendre(sc.n_r);
    double const V2 = V.squaredNorm();
    long const nw = static_cast<long>(ws.size());

    std::vector<MatrixXd> Dparts(nw);
    std::vector<VectorXd> Lparts(nw);
#pragma omp parallel for schedule(dynamic, 1)
    for (long iw = 0; iw < nw; ++iw)
    {
        double const* om = ws.point(iw);
        MatrixXd M = MatrixXd::Zero(d, d);
        VectorXd L = VectorXd::Zero(d);
        std::vector<double> y(d), g(d), GD(d), GL(d);
        for (std::size_t ix = 0; ix < nx; ++ix)
        {
            double const* x = &xp[ix * d];
            double bx = 0, x2 = 0;
            for (int k = 0; k < d; ++k)
            {
                bx += x[k] * om[k];
                x2 += x[k] * x[k];
            }
            double const sin_ = -bx - std::sqrt(std::max(0.0,
                                                         bx * bx - x2 + R * R));
            std::fill(GD.begin(), GD.end(), 0.0);
            std::fill(GL.begin(), GL.end(), 0.0);
            for_mapped(s_ref, sin_, 0.0, [&](double s, double wsn) {
                for (int k = 0; k < d; ++k)
                    y[k] = x[k] + s * om[k];
                phi.gradient(y.data(), g.data());
                for (int k = 0; k < d; ++k)
                {
                    GD[k] += wsn * g[k];
                    GL[k] += wsn * (-s) * g[k];
                }
            });
            double const wx = xw[ix];
            double const* gx = &xg[ix * d];
            double const* hx = &xh[ix * d * d];
            for (int i = 0; i < d; ++i)
            {
                for (int j = 0; j < d; ++j)
                {
                    M(i, j) += wx * gx[i] * GD[j];
                    L[i] -= wx * hx[i * d + j] * GL[j];
                }
            }
        }
        double wv = 0;
        for (int k = 0; k < d; ++k)
            wv += om[k] * V[k];
        double const rmax = std::max(0.0, -wv) + sc.r_span;
        double WD = 0, WL = 0;
        for_mapped(r_ref, 0.0, rmax, [&](double r, double wr) {
            double e = wr * std::exp(-0.5 * (r * r + 2 * r * wv + V2));
            double rk = ipow(r, d - 3);
            WL += rk * e;
            WD += rk * r * e;
        });
        Dparts[iw] = ws.w[iw] * WD * M;
        Lparts[iw] = ws.w[iw] * WL * L;
    }
    FullTensorResult out{MatrixXd::Zero(d, d), VectorXd::Zero(d)};
    for (long iw = 0; iw < nw; ++iw)
    {
        out.D += Dparts[iw];
        out.Lambda += Lparts[iw];
    }
    out.D *= gaussian_norm(d);
    out.Lambda *= gaussian_norm(d);
    return out;
}

struct CoefficientTable::Splines
{
    boost::math::interpolators::cardinal_cubic_b_spline<double> a, b, lambda;
};

CoefficientTable::CoefficientTable(LandauCoefficients const& lc, int knots,
                                   double vmax, bool parallel)
    : d_{lc.dim()}, vmax_{vmax}
{
    if (knots < 4)
        throw std::invalid_argument("CoefficientTable: need at least 4 knots");
    knots_.resize(knots);
    double const h = vmax / (knots - 1);
    if (parallel)
    {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < knots; ++k)
            knots_[k] = lc.radial(k * h);
    }
    else
    {
        for (int k = 0; k < knots; ++k)
            knots_[k] = lc.radial(k * h);
    }
    build();
}

CoefficientTable CoefficientTable::zero(int d, int knots, double vmax)
{
    CoefficientTable t;
    t.d_ = d;
    t.vmax_ = vmax;
    t.knots_.resize(knots);
    double const h = vmax / (knots - 1);
    for (int k = 0; k < knots; ++k)
        t.knots_[k] = {k * h, 0, 0, 0};
    t.build();
    return t;
}

void CoefficientTable::build()
{
    std::size_t const n = knots_.size();
    std::vector<double> a(n), b(n), l(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        a[k] = knots_[k].a;
        b[k] = knots_[k].b;
        l[k] = knots_[k].lambda;
    }
    double const h = vmax_ / (n - 1);
    using boost::math::interpolators::cardinal_cubic_b_spline;
    // a and b are even in |V|, lambda is odd: the slopes at 0 follow
    double const l0 = (l[1] - 0.0) / h;
    splines_ = std::make_shared<Splines const>(Splines{
        cardinal_cubic_b_spline<double>(a.begin(), a.end(), 0.0, h, 0.0),
        cardinal_cubic_b_spline<double>(b.begin(), b.end(), 0.0, h, 0.0),
        cardinal_cubic_b_spline<double>(l.begin(), l.end(), 0.0, h, l0)});
}

RadialCoefficients CoefficientTable::radial(double speed) const
{
    double s = std::min(speed, vmax_);
    return {speed, splines_->a(s), splines_->b(s), splines_->lambda(s)};
}

CoefficientTable::Sample CoefficientTable::evaluate(VectorXd const& V) const
{
    RadialCoefficients rc = radial(V.norm());
    Sample out;
    out.D = assemble_matrix(V, rc.a, rc.b);
    out.Lambda = assemble_vector(V, rc.lambda);
    out.Sigma = assemble_matrix(V, std::sqrt(std::max(rc.a, 0.0)),
                                std::sqrt(std::max(rc.b, 0.0)));
    return out;
}

double CoefficientTable::generator(VectorXd const& V, VectorXd const& grad_f,
                                   MatrixXd const& hess_f) const
{
    RadialCoefficients rc = radial(V.norm());
    MatrixXd D = assemble_matrix(V, rc.a, rc.b);
    VectorXd L = assemble_vector(V, rc.lambda);
    return 2 * grad_f.dot(L) + (hess_f.array() * D.array()).sum();
}

std::vector<StationarityTerm> generator_stationarity(LandauCoefficients const& lc,
                                                     int nodes)
{
    int const d = lc.dim();
    QuadRule const gh = gauss_hermite(nodes);
    std::map<std::vector<int>, RadialCoefficients> cache;
    std::vector<double> acc(4, 0.0);
    std::vector<int> idx(d, 0);
    VectorXd V(d);
    while (true)
    {
        double w = 1;
        for (int k = 0; k < d; ++k)
        {
            V[k] = gh.x[idx[k]];
            w *= gh.w[idx[k]];
        }
        // distinct speeds are identified by the sorted node magnitudes
        std::vector<int> key(d);
        for (int k = 0; k < d; ++k)
            key[k] = std::min(idx[k], nodes - 1 - idx[k]);
        std::sort(key.begin(), key.end());
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, lc.radial(V.norm())).first;
        TransportCoefficients c;
        c.D = assemble_matrix(V, it->second.a, it->second.b);
        c.Lambda = assemble_vector(V, it->second.lambda);

        double const v2 = V.squaredNorm();
        VectorXd g = VectorXd::Zero(d);
        MatrixXd H = MatrixXd::Zero(d, d);
        g[0] = 1;
        acc[0] += w * generator_apply(c, g, H);
        if (d >= 2)
        {
            g.setZero();
            g[0] = V[1];
            g[1] = V[0];
            H(0, 1) = H(1, 0) = 1;
            acc[1] += w * generator_apply(c, g, H);
        }
        g = 2 * V;
        H = 2 * MatrixXd::Identity(d, d);
        acc[2] += w * generator_apply(c, g, H);
        g = 4 * v2 * V;
        H = 4 * v2 * MatrixXd::Identity(d, d) + 8 * V * V.transpose();
        acc[3] += w * generator_apply(c, g, H);

        int k = 0;
        while (k < d && ++idx[k] == nodes)
            idx[k++] = 0;
        if (k == d)
            break;
    }
    return {{"v1", acc[0]}, {"v1v2", acc[1]}, {"|v|^2", acc[2]}, {"|v|^4", acc[3]}};
}

}  // namespace landau
