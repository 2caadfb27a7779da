#include "multigrid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ringmap::detail {

void GridOperator::resize(int nx_, int ny_) {
    nx = nx_;
    ny = ny_;
    stride = nx + 2;
    std::size_t n = static_cast<std::size_t>(nx + 2) * (ny + 2);
    diag.assign(n, 0.0);
    ce.assign(n, 0.0);
    cn.assign(n, 0.0);
}

void GridOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t W = stride;
    for (int j = 0; j < ny; ++j) {
        std::size_t k = index(0, j);
        for (int i = 0; i < nx; ++i, ++k) {
            y[k] = diag[k] * x[k] - ce[k] * x[k + 1] - ce[k - 1] * x[k - 1] - cn[k] * x[k + W] -
                   cn[k - W] * x[k - W];
        }
    }
}

namespace {

constexpr int kCoarsestCells = 64;
constexpr int kCoarseSweeps = 40;
constexpr int kSmoothSweeps = 1;
// Galerkin aggregation doubles the effective stiffness of the Laplacian per level.
constexpr double kCoarseScale = 0.5;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

MultigridPcg::MultigridPcg(GridOperator fine) {
    levels_.push_back({std::move(fine), {}, {}, {}, {}});
    for (;;) {
        const GridOperator& f = levels_.back().op;
        if (f.nx * f.ny <= kCoarsestCells || (f.nx <= 2 && f.ny <= 2)) break;
        GridOperator c;
        c.resize((f.nx + 1) / 2, (f.ny + 1) / 2);
        for (int j = 0; j < f.ny; ++j) {
            for (int i = 0; i < f.nx; ++i) {
                std::size_t k = f.index(i, j);
                if (f.diag[k] == 0.0) continue;
                std::size_t K = c.index(i / 2, j / 2);
                c.diag[K] += f.diag[k];
                if (double e = f.ce[k]; e != 0.0) {
                    if ((i + 1) / 2 == i / 2) c.diag[K] -= 2 * e;
                    else c.ce[K] += e;
                }
                if (double n = f.cn[k]; n != 0.0) {
                    if ((j + 1) / 2 == j / 2) c.diag[K] -= 2 * n;
                    else c.cn[K] += n;
                }
            }
        }
        for (std::size_t k = 0; k < c.size(); ++k) {
            c.diag[k] *= kCoarseScale;
            c.ce[k] *= kCoarseScale;
            c.cn[k] *= kCoarseScale;
            if (c.diag[k] < 1e-300) c.diag[k] = 0.0;
        }
        levels_.push_back({std::move(c), {}, {}, {}, {}});
    }
    for (Level& L : levels_) {
        std::size_t n = L.op.size();
        L.inv_diag.assign(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            if (L.op.diag[k] > 0.0) L.inv_diag[k] = 1.0 / L.op.diag[k];
        L.x.assign(n, 0.0);
        L.b.assign(n, 0.0);
        L.r.assign(n, 0.0);
    }
}

void MultigridPcg::smooth(const Level& L, int color) const {
    const GridOperator& A = L.op;
    const std::size_t W = A.stride;
    double* x = L.x.data();
    const double* b = L.b.data();
    const double* ce = A.ce.data();
    const double* cn = A.cn.data();
    const double* id = L.inv_diag.data();
    for (int j = 0; j < A.ny; ++j) {
        int i0 = (j + color) & 1;
        std::size_t k = A.index(i0, j);
        for (int i = i0; i < A.nx; i += 2, k += 2) {
            x[k] = (b[k] + ce[k] * x[k + 1] + ce[k - 1] * x[k - 1] + cn[k] * x[k + W] +
                    cn[k - W] * x[k - W]) *
                   id[k];
        }
    }
}

// Zebra line relaxation: rows j with (j & 1) == color are solved exactly along x.
void MultigridPcg::smooth_rows(const Level& L, int color) const {
    const GridOperator& A = L.op;
    const std::size_t W = A.stride;
    double* x = L.x.data();
    cp_.resize(std::max(A.nx, A.ny) + 2);
    dp_.resize(std::max(A.nx, A.ny) + 2);
    for (int j = color; j < A.ny; j += 2) {
        std::size_t k0 = A.index(0, j);
        // Forward sweep of the Thomas algorithm; inactive cells become identity rows.
        double cprev = 0.0, dprev = 0.0;
        for (int i = 0; i < A.nx; ++i) {
            std::size_t k = k0 + i;
            double dg = A.diag[k];
            if (dg == 0.0) {
                cp_[i] = 0.0;
                dp_[i] = 0.0;
                cprev = 0.0;
                dprev = 0.0;
                continue;
            }
            double rhs = L.b[k] + A.cn[k] * x[k + W] + A.cn[k - W] * x[k - W];
            double lower = -A.ce[k - 1];
            double upper = -A.ce[k];
            double m = dg - lower * cprev;
            cp_[i] = upper / m;
            dp_[i] = (rhs - lower * dprev) / m;
            cprev = cp_[i];
            dprev = dp_[i];
        }
        double next = 0.0;
        for (int i = A.nx - 1; i >= 0; --i) {
            std::size_t k = k0 + i;
            next = dp_[i] - cp_[i] * next;
            x[k] = next;
        }
    }
}

void MultigridPcg::smooth_cols(const Level& L, int color) const {
    const GridOperator& A = L.op;
    const std::size_t W = A.stride;
    double* x = L.x.data();
    cp_.resize(std::max(A.nx, A.ny) + 2);
    dp_.resize(std::max(A.nx, A.ny) + 2);
    for (int i = color; i < A.nx; i += 2) {
        double cprev = 0.0, dprev = 0.0;
        for (int j = 0; j < A.ny; ++j) {
            std::size_t k = A.index(i, j);
            double dg = A.diag[k];
            if (dg == 0.0) {
                cp_[j] = 0.0;
                dp_[j] = 0.0;
                cprev = 0.0;
                dprev = 0.0;
                continue;
            }
            double rhs = L.b[k] + A.ce[k] * x[k + 1] + A.ce[k - 1] * x[k - 1];
            double lower = -A.cn[k - W];
            double upper = -A.cn[k];
            double m = dg - lower * cprev;
            cp_[j] = upper / m;
            dp_[j] = (rhs - lower * dprev) / m;
            cprev = cp_[j];
            dprev = dp_[j];
        }
        double next = 0.0;
        for (int j = A.ny - 1; j >= 0; --j) {
            next = dp_[j] - cp_[j] * next;
            x[A.index(i, j)] = next;
        }
    }
}

void MultigridPcg::presmooth(const Level& L) const {
    smooth_rows(L, 0);
    smooth_rows(L, 1);
    smooth_cols(L, 0);
    smooth_cols(L, 1);
}

void MultigridPcg::postsmooth(const Level& L) const {
    smooth_cols(L, 1);
    smooth_cols(L, 0);
    smooth_rows(L, 1);
    smooth_rows(L, 0);
}

void MultigridPcg::vcycle(std::size_t l) const {
    const Level& L = levels_[l];
    std::fill(L.x.begin(), L.x.end(), 0.0);
    if (l + 1 == levels_.size()) {
        for (int s = 0; s < kCoarseSweeps; ++s) presmooth(L);
        for (int s = 0; s < kCoarseSweeps; ++s) postsmooth(L);
        return;
    }
    for (int s = 0; s < kSmoothSweeps; ++s) presmooth(L);
    L.op.apply(L.x, L.r);
    for (std::size_t k = 0; k < L.r.size(); ++k) L.r[k] = L.b[k] - L.r[k];
    const Level& C = levels_[l + 1];
    std::fill(C.b.begin(), C.b.end(), 0.0);
    for (int j = 0; j < L.op.ny; ++j)
        for (int i = 0; i < L.op.nx; ++i) {
            std::size_t k = L.op.index(i, j);
            if (L.inv_diag[k] != 0.0) C.b[C.op.index(i / 2, j / 2)] += L.r[k];
        }
    vcycle(l + 1);
    for (int j = 0; j < L.op.ny; ++j)
        for (int i = 0; i < L.op.nx; ++i) {
            std::size_t k = L.op.index(i, j);
            if (L.inv_diag[k] != 0.0) L.x[k] += C.x[C.op.index(i / 2, j / 2)];
        }
    for (int s = 0; s < kSmoothSweeps; ++s) postsmooth(L);
}

SolveStats MultigridPcg::solve(const std::vector<double>& b, std::vector<double>& x, double tol,
                               int max_iterations) const {
    const GridOperator& A = op();
    const Level& F = levels_.front();
    std::size_t n = A.size();
    std::vector<double> r(n), z(n), p(n), q(n);
    A.apply(x, q);
    for (std::size_t k = 0; k < n; ++k) r[k] = F.inv_diag[k] != 0.0 ? b[k] - q[k] : 0.0;
    double bnorm = std::sqrt(dot(b, b));
    SolveStats st;
    if (bnorm == 0.0) {
        st.converged = true;
        return st;
    }
    auto precondition = [&]() {
        F.b = r;
        vcycle(0);
        z = F.x;
    };
    precondition();
    p = z;
    double rz = dot(r, z);
    for (int it = 0; it < max_iterations; ++it) {
        double rn = std::sqrt(dot(r, r)) / bnorm;
        st.relative_residual = rn;
        st.iterations = it;
        if (rn <= tol) {
            st.converged = true;
            return st;
        }
        A.apply(p, q);
        double alpha = rz / dot(p, q);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        precondition();
        double rz_new = dot(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    st.relative_residual = std::sqrt(dot(r, r)) / bnorm;
    st.iterations = max_iterations;
    st.converged = st.relative_residual <= tol;
    return st;
}

}  // namespace ringmap::detail
