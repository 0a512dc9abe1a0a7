#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace currl::active {

struct SingularDesign : std::runtime_error {
    explicit SingularDesign(const std::string& what) : std::runtime_error(what) {}
};

// Appends the constant bias feature: x -> [x; 1].
Eigen::VectorXd augment(const Eigen::VectorXd& x);

// Ordinary least squares on bias-augmented rows: minimizes
// sum_t (y_t - theta^T [x_t; 1])^2. Requires n >= d and a well-conditioned
// Gram matrix; rank deficiency raises SingularDesign.
Eigen::VectorXd ols_fit(const std::vector<Eigen::VectorXd>& xs,
                        const std::vector<double>& y);

// Expected squared parameter error sigma^2 * Tr[A] with A = (X^T X)^-1.
double expected_param_error(double sigma_sq, const Eigen::MatrixXd& A);

// Reduction of Tr[A] from appending design row v: v^T A A v / (1 + v^T A v).
double trace_gain(const Eigen::MatrixXd& A, const Eigen::VectorXd& v);

double predict(const Eigen::VectorXd& theta, const Eigen::VectorXd& v);

struct Candidate {
    Eigen::VectorXd v;
    int id = 0;  // caller-defined task/pair identifier
};

// Index of the candidate with the largest trace_gain, i.e. the one whose
// measurement shrinks the parameter-error trace the most. Ties break to the
// lowest index.
std::size_t select_sample(const Eigen::MatrixXd& A,
                          const std::vector<Candidate>& candidates);

// Incremental least-squares state over fully formed feature vectors (the
// caller decides where the bias sits). Maintains A = (X^T X)^-1 by
// Sherman-Morrison rank-one updates once enough independent rows have
// arrived for the batch inverse to exist.
class DesignState {
public:
    explicit DesignState(int dim);

    int dim() const { return dim_; }
    int row_count() const { return static_cast<int>(rows_.size()); }
    const std::vector<Eigen::VectorXd>& rows() const { return rows_; }
    const std::vector<double>& targets() const { return y_; }

    // Appends (v, y). Returns true once the inverse Gram matrix is defined.
    bool add(const Eigen::VectorXd& v, double y);

    bool gram_inverse_ready() const { return ready_; }
    const Eigen::MatrixXd& gram_inverse() const;

    // OLS coefficients A X^T y; requires the inverse to be ready.
    const Eigen::VectorXd& theta() const;

    // Ridge fallback (X^T X + lambda I)^-1 X^T y; works for any n >= 1.
    Eigen::VectorXd theta_ridge(double lambda) const;

    // Residual variance estimate RSS / (n - d); requires n > d.
    double noise_variance() const;

private:
    void refresh_theta();

    int dim_;
    std::vector<Eigen::VectorXd> rows_;
    std::vector<double> y_;
    Eigen::MatrixXd gram_inverse_;
    Eigen::VectorXd xty_;
    Eigen::VectorXd theta_;
    bool ready_ = false;
};

}  // namespace currl::active
