#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "kolm/errors.hpp"

namespace kolm {

/// A point z = (t, x) of R^{1+d}.
struct GroupPoint {
    double t = 0.0;
    Eigen::VectorXd x;

    GroupPoint() = default;
    GroupPoint(double t_, Eigen::VectorXd x_) : t(t_), x(std::move(x_)) {}
};

/// Spatial multi-index beta = (beta_1, ..., beta_d), all entries >= 0.
using MultiIndex = std::vector<int>;

inline int multi_abs(const MultiIndex& beta) {
    return std::accumulate(beta.begin(), beta.end(), 0);
}

/// Index (k, beta) of the intrinsic derivative Y^k d^beta.
struct IntrinsicIndex {
    int k = 0;
    MultiIndex beta;

    bool operator==(const IntrinsicIndex& o) const { return k == o.k && beta == o.beta; }
};

/// Block data of the drift matrix: layer sizes (p_0, ..., p_r) and the
/// sub-diagonal blocks B_j of shape p_j x p_{j-1}.
struct BlockStructure {
    std::vector<int> layer_dims;
    std::vector<Eigen::MatrixXd> blocks;
};

/// The homogeneous group G_B: assembled drift matrix, layer bookkeeping,
/// dilation exponents and the spatial homogeneous dimension Q.
/// Immutable after construction; all member operations are pure.
class HomogeneousGroup {
public:
    explicit HomogeneousGroup(BlockStructure structure, double rank_rtol = 1e-9)
        : structure_(std::move(structure)) {
        validate(rank_rtol);

        d_ = std::accumulate(structure_.layer_dims.begin(), structure_.layer_dims.end(), 0);
        r_ = static_cast<int>(structure_.layer_dims.size()) - 1;

        bar_p_.resize(r_ + 1);
        int acc = 0;
        for (int j = 0; j <= r_; ++j) {
            acc += structure_.layer_dims[j];
            bar_p_[j] = acc;
        }

        B_ = Eigen::MatrixXd::Zero(d_, d_);
        for (int j = 1; j <= r_; ++j) {
            const int row0 = bar_p_[j - 1];
            const int col0 = (j >= 2) ? bar_p_[j - 2] : 0;
            B_.block(row0, col0, structure_.layer_dims[j], structure_.layer_dims[j - 1]) =
                structure_.blocks[j - 1];
        }

        // Powers B^0..B^r; B^{r+1} = 0 by nilpotency.
        b_powers_.reserve(r_ + 1);
        b_powers_.push_back(Eigen::MatrixXd::Identity(d_, d_));
        for (int j = 1; j <= r_; ++j)
            b_powers_.push_back(B_ * b_powers_.back());

        spatial_exponents_.resize(d_);
        layer_of_.resize(d_);
        Q_ = 0;
        for (int j = 0; j <= r_; ++j) {
            const int lo = (j == 0) ? 0 : bar_p_[j - 1];
            for (int i = lo; i < bar_p_[j]; ++i) {
                spatial_exponents_[i] = 2 * j + 1;
                layer_of_[i] = j;
            }
            Q_ += (2 * j + 1) * structure_.layer_dims[j];
        }
    }

    const BlockStructure& structure() const { return structure_; }
    int d() const { return d_; }
    int r() const { return r_; }
    int p0() const { return structure_.layer_dims[0]; }
    const Eigen::MatrixXd& B() const { return B_; }
    const std::vector<int>& bar_p() const { return bar_p_; }
    /// Dilation exponent 2j+1 of spatial coordinate i (0-based).
    int spatial_exponent(int i) const { return spatial_exponents_[i]; }
    /// Layer j containing spatial coordinate i (0-based).
    int layer_of(int i) const { return layer_of_[i]; }
    int Q() const { return Q_; }
    const Eigen::MatrixXd& b_power(int n) const { return b_powers_[n]; }

    /// e^{delta B} = I + sum_{j=1..r} B^j delta^j / j!, exact by nilpotency.
    Eigen::MatrixXd exp_B(double delta) const {
        Eigen::MatrixXd e = b_powers_[0];
        double fact = 1.0;
        double pow_d = 1.0;
        for (int j = 1; j <= r_; ++j) {
            fact *= j;
            pow_d *= delta;
            e += (pow_d / fact) * b_powers_[j];
        }
        return e;
    }

    /// e^{delta B} x without forming the matrix.
    Eigen::VectorXd apply_exp_B(double delta, const Eigen::VectorXd& x) const {
        Eigen::VectorXd y = x;
        double fact = 1.0;
        double pow_d = 1.0;
        for (int j = 1; j <= r_; ++j) {
            fact *= j;
            pow_d *= delta;
            y.noalias() += (pow_d / fact) * (b_powers_[j] * x);
        }
        return y;
    }

    /// Group law: (t,x) o (s,xi) = (s+t, xi + e^{sB} x).
    GroupPoint compose(const GroupPoint& z, const GroupPoint& w) const {
        check_dim(z);
        check_dim(w);
        return {z.t + w.t, w.x + apply_exp_B(w.t, z.x)};
    }

    /// Group inverse: (t,x)^{-1} = (-t, -e^{-tB} x).
    GroupPoint inverse(const GroupPoint& z) const {
        check_dim(z);
        return {-z.t, -apply_exp_B(-z.t, z.x)};
    }

    GroupPoint identity() const { return {0.0, Eigen::VectorXd::Zero(d_)}; }

    /// Anisotropic dilation: t -> lambda^2 t, layer-j coordinates -> lambda^{2j+1}.
    GroupPoint dilate(double lambda, const GroupPoint& z) const {
        if (!(lambda > 0.0))
            throw NonPositiveLambdaError("dilate: lambda must be positive, got " +
                                         std::to_string(lambda));
        check_dim(z);
        GroupPoint out{lambda * lambda * z.t, z.x};
        for (int i = 0; i < d_; ++i)
            out.x[i] *= std::pow(lambda, spatial_exponents_[i]);
        return out;
    }

    /// Homogeneous quasi-norm |t|^{1/2} + sum_i |x_i|^{1/(2j+1)}.
    double quasi_norm(const GroupPoint& z) const {
        check_dim(z);
        double n = std::sqrt(std::abs(z.t));
        for (int i = 0; i < d_; ++i)
            n += std::pow(std::abs(z.x[i]), 1.0 / spatial_exponents_[i]);
        return n;
    }

    /// B-length of a spatial multi-index: sum over layers of (2j+1) |beta restricted to layer j|.
    int b_length(const MultiIndex& beta) const {
        if (static_cast<int>(beta.size()) != d_)
            throw DimensionMismatchError("b_length: multi-index has length " +
                                         std::to_string(beta.size()) + ", expected " +
                                         std::to_string(d_));
        int len = 0;
        for (int i = 0; i < d_; ++i)
            len += spatial_exponents_[i] * beta[i];
        return len;
    }

    int intrinsic_order(const IntrinsicIndex& idx) const { return 2 * idx.k + b_length(idx.beta); }

    /// Integral curve of a coordinate field: e^{delta d_{x_i}} (t,x) = (t, x + delta e_i).
    /// Coordinate index i is 1-based and must not exceed p_0.
    GroupPoint flow_coordinate(int i, double delta, const GroupPoint& z) const {
        check_dim(z);
        if (i < 1 || i > p0())
            throw FieldIndexOutOfRangeError("flow: coordinate field index " + std::to_string(i) +
                                            " out of range [1," + std::to_string(p0()) + "]");
        GroupPoint out = z;
        out.x[i - 1] += delta;
        return out;
    }

    /// Integral curve of the drift field: e^{delta Y} (t,x) = (t + delta, e^{delta B} x).
    GroupPoint flow_Y(double delta, const GroupPoint& z) const {
        check_dim(z);
        return {z.t + delta, apply_exp_B(delta, z.x)};
    }

private:
    void validate(double rank_rtol) const {
        const auto& dims = structure_.layer_dims;
        if (dims.empty())
            throw ValidationError("BlockStructure: layer_dims must be nonempty");
        for (int p : dims)
            if (p < 1)
                throw ValidationError("BlockStructure: layer dims must be positive");
        for (size_t j = 1; j < dims.size(); ++j)
            if (dims[j] > dims[j - 1])
                throw NonMonotoneLayersError("layer dims must be non-increasing: p_" +
                                             std::to_string(j) + " = " + std::to_string(dims[j]) +
                                             " > p_" + std::to_string(j - 1) + " = " +
                                             std::to_string(dims[j - 1]));
        if (structure_.blocks.size() + 1 != dims.size())
            throw ValidationError("BlockStructure: expected " + std::to_string(dims.size() - 1) +
                                  " blocks, got " + std::to_string(structure_.blocks.size()));
        for (size_t j = 0; j < structure_.blocks.size(); ++j) {
            const auto& blk = structure_.blocks[j];
            if (blk.rows() != dims[j + 1] || blk.cols() != dims[j])
                throw ValidationError("block " + std::to_string(j + 1) + " must be " +
                                      std::to_string(dims[j + 1]) + "x" + std::to_string(dims[j]));
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(blk);
            const auto& sv = svd.singularValues();
            if (sv.size() == 0 || sv(sv.size() - 1) <= rank_rtol * sv(0))
                throw RankDeficientBlockError("block " + std::to_string(j + 1) +
                                              " is rank deficient (needs full row rank " +
                                              std::to_string(dims[j + 1]) + ")");
        }
    }

    void check_dim(const GroupPoint& z) const {
        if (z.x.size() != d_)
            throw DimensionMismatchError("point has spatial dimension " +
                                         std::to_string(z.x.size()) + ", expected " +
                                         std::to_string(d_));
    }

    BlockStructure structure_;
    int d_ = 0;
    int r_ = 0;
    Eigen::MatrixXd B_;
    std::vector<Eigen::MatrixXd> b_powers_;
    std::vector<int> bar_p_;
    std::vector<int> spatial_exponents_;
    std::vector<int> layer_of_;
    int Q_ = 0;
};

/// A first-order intrinsic field: either a coordinate field d_{x_i}
/// (i 1-based, i <= p_0) or the drift field Y.
struct Field {
    bool is_y = false;
    int index = 0; // 1-based, only for coordinate fields

    static Field Y() { return {true, 0}; }
    static Field dx(int i) { return {false, i}; }
};

inline GroupPoint flow(const HomogeneousGroup& g, const Field& f, double delta,
                       const GroupPoint& z) {
    return f.is_y ? g.flow_Y(delta, z) : g.flow_coordinate(f.index, delta, z);
}

/// Langevin group: d = 2, B = [[0,0],[1,0]], Q = 4.
inline HomogeneousGroup langevin_group() {
    BlockStructure s;
    s.layer_dims = {1, 1};
    s.blocks = {Eigen::MatrixXd::Constant(1, 1, 1.0)};
    return HomogeneousGroup(std::move(s));
}

} // namespace kolm
