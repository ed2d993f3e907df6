#ifndef TWRI_DAE_HPP_
#define TWRI_DAE_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace twri {

enum class Mapping { linear, tanh_fn, sigmoid };
Mapping mapping_from_string(const std::string& s);
std::string to_string(Mapping m);

/// Element-wise forward map.
Eigen::MatrixXd apply_mapping(Mapping m, const Eigen::MatrixXd& x);
/// Element-wise inverse with clamping (sigmoid to [1e-6, 1-1e-6], tanh to
/// [-1+1e-6, 1-1e-6]); increments *clamp_count per clamped entry.
Eigen::MatrixXd apply_inverse_mapping(Mapping m, const Eigen::MatrixXd& x,
                                      std::int64_t* clamp_count = nullptr);

struct TrainConfig {
  int r = 500;
  double lambda = 1.0;
  Mapping mapping = Mapping::linear;
  int max_sweeps = 200;
  double tol = 1e-6;
  double ridge_scale = 1e-8;  // epsilon = ridge_scale * mean Gram diagonal
  std::uint64_t init_seed = 7;
};

struct DaeModel {
  Eigen::MatrixXd w1;  // r x N
  Eigen::MatrixXd w2;  // N x r
  Mapping mapping = Mapping::linear;
  double lambda = 1.0;
  std::vector<double> objective_log;  // Eq.-5 value per sweep
  std::int64_t clamp_count = 0;
  double train_seconds = 0.0;

  int r() const { return static_cast<int>(w1.rows()); }
  int n() const { return static_cast<int>(w1.cols()); }
};

Eigen::MatrixXd encode(const DaeModel& model, const Eigen::MatrixXd& yhat);
Eigen::MatrixXd decode(const DaeModel& model, const Eigen::MatrixXd& z);

/// ||Y - W2 Z||_F^2 + lambda ||Z - phi(W1 Yhat)||_F^2.
double dae_objective(const Eigen::MatrixXd& y, const Eigen::MatrixXd& yhat,
                     const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2,
                     const Eigen::MatrixXd& z, double lambda, Mapping mapping);

/// Cached economy SVD of Yhat, reused across sweeps (Yhat never changes).
struct InputFactorization {
  Eigen::MatrixXd u;   // N x q
  Eigen::VectorXd s;   // q
  Eigen::MatrixXd v;   // M x q
  double ridge = 0.0;
  explicit InputFactorization(const Eigen::MatrixXd& yhat,
                              double ridge_scale = 1e-8);
  /// T * pseudo-inverse(Yhat) with Tikhonov-damped singular values.
  Eigen::MatrixXd apply_pinv_right(const Eigen::MatrixXd& t) const;
};

/// argmin_W1 ||phi^{-1}(Z) - W1 Yhat||_F^2 via the SVD pseudo-inverse.
/// When prev is non-null, damps the step toward prev until the data-fit
/// term ||Z - phi(W1 Yhat)||_F^2 does not increase (a no-op for linear phi).
Eigen::MatrixXd solve_w1(const Eigen::MatrixXd& z, const Eigen::MatrixXd& yhat,
                         Mapping mapping, double ridge_scale = 1e-8,
                         std::int64_t* clamp_count = nullptr);
Eigen::MatrixXd solve_w1(const Eigen::MatrixXd& z, const InputFactorization& f,
                         const Eigen::MatrixXd& yhat, Mapping mapping,
                         const Eigen::MatrixXd* prev,
                         std::int64_t* clamp_count = nullptr);

/// W2 = Y Z^T (Z Z^T + eps I)^{-1}.
Eigen::MatrixXd solve_w2(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                         double ridge_scale = 1e-8);

/// Z = (W2^T W2 + lambda I)^{-1} (W2^T Y + lambda phi(W1 Yhat)).
Eigen::MatrixXd solve_z(const Eigen::MatrixXd& y, const Eigen::MatrixXd& yhat,
                        const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2,
                        double lambda, Mapping mapping);

/// Alternating exact minimization, sweeps of solve_w1 -> solve_w2 -> solve_z
/// from a seeded Gaussian init (std 1/sqrt(N)), until the relative objective
/// change drops below tol. The objective log is non-increasing.
DaeModel train(const Eigen::MatrixXd& y, const Eigen::MatrixXd& yhat,
               const TrainConfig& cfg);

/// W2 phi(W1 yhat) per column; clamped to >= 0 and renormalized to peak 1
/// column-wise when renormalize is set.
Eigen::MatrixXd denoise(const DaeModel& model, const Eigen::MatrixXd& yhat,
                        bool renormalize = true);

void save_model(const std::string& dir, const DaeModel& model);
DaeModel load_model(const std::string& dir);

}  // namespace twri

#endif  // TWRI_DAE_HPP_
