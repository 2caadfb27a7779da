#pragma once

#include <cstdint>
#include <vector>

namespace ringmap::detail {

/// Symmetric five-point operator on a structured grid with a ghost ring:
/// (A x)_k = diag_k x_k - sum of conductance * neighbour. Cells with diag = 0 are inactive.
struct GridOperator {
    int nx = 0, ny = 0;
    int stride = 0;  // nx + 2
    std::vector<double> diag, ce, cn;

    void resize(int nx_, int ny_);
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j + 1) * stride + static_cast<std::size_t>(i + 1);
    }
    std::size_t size() const { return diag.size(); }
    void apply(const std::vector<double>& x, std::vector<double>& y) const;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Conjugate gradients preconditioned by an aggregation V-cycle.
class MultigridPcg {
public:
    explicit MultigridPcg(GridOperator fine);
    SolveStats solve(const std::vector<double>& b, std::vector<double>& x, double tol,
                     int max_iterations) const;
    const GridOperator& op() const { return levels_.front().op; }

private:
    struct Level {
        GridOperator op;
        std::vector<double> inv_diag;
        mutable std::vector<double> x, b, r;
    };
    std::vector<Level> levels_;

    void vcycle(std::size_t l) const;
    void smooth(const Level& L, int color) const;
    void smooth_rows(const Level& L, int color) const;
    void smooth_cols(const Level& L, int color) const;
    void presmooth(const Level& L) const;
    void postsmooth(const Level& L) const;
    mutable std::vector<double> cp_, dp_;
};

}  // namespace ringmap::detail
