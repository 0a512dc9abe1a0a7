#include "currl/active_regression.hpp"

namespace currl::active {

namespace {

constexpr double kConditionFloor = 1e-12;   // min/max eigenvalue ratio
constexpr double kDenominatorFloor = 1e-12; // for 1 + v^T A v

// Inverts an SPD Gram matrix through its eigendecomposition, refusing when
// the condition number is past kConditionFloor.
bool invert_gram(const Eigen::MatrixXd& gram, Eigen::MatrixXd& out) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) {
        return false;
    }
    const auto& values = eig.eigenvalues();
    const double max_ev = values(values.size() - 1);
    const double min_ev = values(0);
    if (max_ev <= 0.0 || min_ev <= kConditionFloor * max_ev) {
        return false;
    }
    out = eig.eigenvectors() * values.cwiseInverse().asDiagonal() *
          eig.eigenvectors().transpose();
    return true;
}

}  // namespace

Eigen::VectorXd augment(const Eigen::VectorXd& x) {
    Eigen::VectorXd v(x.size() + 1);
    v.head(x.size()) = x;
    v(x.size()) = 1.0;
    return v;
}

Eigen::VectorXd ols_fit(const std::vector<Eigen::VectorXd>& xs,
                        const std::vector<double>& y) {
    if (xs.size() != y.size()) {
        throw std::invalid_argument("ols_fit: xs and y sizes differ");
    }
    if (xs.empty()) {
        throw std::invalid_argument("ols_fit: no data");
    }
    const int d = static_cast<int>(xs[0].size()) + 1;
    if (static_cast<int>(xs.size()) < d) {
        throw SingularDesign("ols_fit: fewer rows than parameters");
    }
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(d);
    for (std::size_t t = 0; t < xs.size(); ++t) {
        if (xs[t].size() + 1 != d) {
            throw std::invalid_argument("ols_fit: inconsistent row dimensions");
        }
        const Eigen::VectorXd v = augment(xs[t]);
        gram.noalias() += v * v.transpose();
        xty.noalias() += y[t] * v;
    }
    Eigen::MatrixXd inverse;
    if (!invert_gram(gram, inverse)) {
        throw SingularDesign("ols_fit: rank-deficient design");
    }
    return inverse * xty;
}

double expected_param_error(double sigma_sq, const Eigen::MatrixXd& A) {
    if (sigma_sq < 0.0) {
        throw std::invalid_argument("expected_param_error: negative noise variance");
    }
    return sigma_sq * A.trace();
}

double trace_gain(const Eigen::MatrixXd& A, const Eigen::VectorXd& v) {
    const Eigen::VectorXd av = A * v;
    return av.squaredNorm() / (1.0 + v.dot(av));
}

double predict(const Eigen::VectorXd& theta, const Eigen::VectorXd& v) {
    if (theta.size() != v.size()) {
        throw std::invalid_argument("predict: dimension mismatch");
    }
    return theta.dot(v);
}

std::size_t select_sample(const Eigen::MatrixXd& A,
                          const std::vector<Candidate>& candidates) {
    if (candidates.empty()) {
        throw std::invalid_argument("select_sample: empty candidate list");
    }
    std::size_t best = 0;
    double best_gain = trace_gain(A, candidates[0].v);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double gain = trace_gain(A, candidates[i].v);
        if (gain > best_gain) {
            best_gain = gain;
            best = i;
        }
    }
    return best;
}

DesignState::DesignState(int dim) : dim_(dim) {
    if (dim < 1) {
        throw std::invalid_argument("design state: dimension must be >= 1");
    }
    xty_ = Eigen::VectorXd::Zero(dim);
}

bool DesignState::add(const Eigen::VectorXd& v, double y) {
    if (v.size() != dim_) {
        throw std::invalid_argument("design state: row dimension mismatch");
    }
    if (ready_) {
        const Eigen::VectorXd av = gram_inverse_ * v;
        const double denom = 1.0 + v.dot(av);
        if (denom <= kDenominatorFloor) {
            throw SingularDesign("design state: degenerate rank-one update");
        }
        gram_inverse_.noalias() -= (av * av.transpose()) / denom;
    }
    rows_.push_back(v);
    y_.push_back(y);
    xty_.noalias() += y * v;
    if (!ready_ && row_count() >= dim_) {
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim_, dim_);
        for (const auto& row : rows_) {
            gram.noalias() += row * row.transpose();
        }
        ready_ = invert_gram(gram, gram_inverse_);
    }
    if (ready_) {
        refresh_theta();
    }
    return ready_;
}

const Eigen::MatrixXd& DesignState::gram_inverse() const {
    if (!ready_) {
        throw SingularDesign("design state: inverse Gram matrix not defined yet");
    }
    return gram_inverse_;
}

const Eigen::VectorXd& DesignState::theta() const {
    if (!ready_) {
        throw SingularDesign("design state: fit not available yet");
    }
    return theta_;
}

Eigen::VectorXd DesignState::theta_ridge(double lambda) const {
    if (rows_.empty()) {
        throw std::invalid_argument("design state: ridge fit needs at least one row");
    }
    Eigen::MatrixXd gram = lambda * Eigen::MatrixXd::Identity(dim_, dim_);
    for (const auto& row : rows_) {
        gram.noalias() += row * row.transpose();
    }
    return gram.ldlt().solve(xty_);
}

double DesignState::noise_variance() const {
    if (row_count() <= dim_) {
        throw std::invalid_argument("design state: noise estimate needs n > d");
    }
    const Eigen::VectorXd& fit = theta();
    double rss = 0.0;
    for (std::size_t t = 0; t < rows_.size(); ++t) {
        const double r = y_[t] - fit.dot(rows_[t]);
        rss += r * r;
    }
    return rss / (row_count() - dim_);
}

void DesignState::refresh_theta() {
    theta_ = gram_inverse_ * xty_;
}

}  // namespace currl::active
