#include "twri/dae.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "twri/array_file.hpp"
#include "twri/rng.hpp"
#include "json.hpp"

namespace twri {

using json = nlohmann::json;

Mapping mapping_from_string(const std::string& s) {
  if (s == "linear") return Mapping::linear;
  if (s == "tanh") return Mapping::tanh_fn;
  if (s == "sigmoid") return Mapping::sigmoid;
  throw std::invalid_argument("unknown mapping: " + s);
}

std::string to_string(Mapping m) {
  switch (m) {
    case Mapping::linear: return "linear";
    case Mapping::tanh_fn: return "tanh";
    case Mapping::sigmoid: return "sigmoid";
  }
  throw std::logic_error("unreachable");
}

Eigen::MatrixXd apply_mapping(Mapping m, const Eigen::MatrixXd& x) {
  switch (m) {
    case Mapping::linear: return x;
    case Mapping::tanh_fn: return x.array().tanh();
    case Mapping::sigmoid: return 1.0 / (1.0 + (-x.array()).exp());
  }
  throw std::logic_error("unreachable");
}

Eigen::MatrixXd apply_inverse_mapping(Mapping m, const Eigen::MatrixXd& x,
                                      std::int64_t* clamp_count) {
  if (m == Mapping::linear) return x;
  const double lo = m == Mapping::sigmoid ? 1e-6 : -1.0 + 1e-6;
  const double hi = 1.0 - 1e-6;
  Eigen::MatrixXd out(x.rows(), x.cols());
  std::int64_t clamped = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double v = x(i, j);
      if (v < lo || v > hi) {
        v = std::clamp(v, lo, hi);
        ++clamped;
      }
      out(i, j) = m == Mapping::sigmoid ? std::log(v / (1.0 - v))
                                        : std::atanh(v);
    }
  if (clamp_count) *clamp_count += clamped;
  return out;
}

Eigen::MatrixXd encode(const DaeModel& model, const Eigen::MatrixXd& yhat) {
  if (yhat.rows() != model.w1.cols())
    throw std::invalid_argument("input rows != model pixel count");
  return apply_mapping(model.mapping, model.w1 * yhat);
}

Eigen::MatrixXd decode(const DaeModel& model, const Eigen::MatrixXd& z) {
  if (z.rows() != model.w2.cols())
    throw std::invalid_argument("code rows != model rank");
  return model.w2 * z;
}

double dae_objective(const Eigen::MatrixXd& y, const Eigen::MatrixXd& yhat,
                     const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2,
                     const Eigen::MatrixXd& z, double lambda, Mapping mapping) {
  const double fit = (y - w2 * z).squaredNorm();
  const double code = (z - apply_mapping(mapping, w1 * yhat)).squaredNorm();
  return fit + lambda * code;
}

InputFactorization::InputFactorization(const Eigen::MatrixXd& yhat,
                                       double ridge_scale) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(yhat,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  u = svd.matrixU();
  s = svd.singularValues();
  v = svd.matrixV();
  const double mean_sq = s.size() > 0 ? s.array().square().mean() : 0.0;
  ridge = ridge_scale * mean_sq;
}

Eigen::MatrixXd InputFactorization::apply_pinv_right(
    const Eigen::MatrixXd& t) const {
  Eigen::VectorXd damped(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    damped[i] = s[i] / (s[i] * s[i] + ridge);
  return t * v * damped.asDiagonal() * u.transpose();
}

Eigen::MatrixXd solve_w1(const Eigen::MatrixXd& z, const Eigen::MatrixXd& yhat,
                         Mapping mapping, double ridge_scale,
                         std::int64_t* clamp_count) {
  const InputFactorization f(yhat, ridge_scale);
  return solve_w1(z, f, yhat, mapping, nullptr, clamp_count);
}

Eigen::MatrixXd solve_w1(const Eigen::MatrixXd& z, const InputFactorization& f,
                         const Eigen::MatrixXd& yhat, Mapping mapping,
                         const Eigen::MatrixXd* prev,
                         std::int64_t* clamp_count) {
  const Eigen::MatrixXd target = apply_inverse_mapping(mapping, z, clamp_count);
  Eigen::MatrixXd w1 = f.apply_pinv_right(target);
  if (!prev || mapping == Mapping::linear) return w1;

  const auto fit = [&](const Eigen::MatrixXd& w) {
    return (z - apply_mapping(mapping, w * yhat)).squaredNorm();
  };
  const double f_prev = fit(*prev);
  const double slack = 1e-12 * (1.0 + f_prev);
  double alpha = 1.0;
  for (int it = 0; it < 40; ++it, alpha *= 0.5) {
    const Eigen::MatrixXd cand = *prev + alpha * (w1 - *prev);
    if (fit(cand) <= f_prev + slack) return cand;
  }
  return *prev;
}

Eigen::MatrixXd solve_w2(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                         double ridge_scale) {
  if (y.cols() != z.cols())
    throw std::invalid_argument("column count mismatch between Y and Z");
  Eigen::MatrixXd gram = z * z.transpose();
  double eps = ridge_scale * gram.diagonal().mean();
  if (!(eps > 0.0)) eps = ridge_scale;
  gram.diagonal().array() += eps;
  return gram.llt().solve(z * y.transpose()).transpose();
}

Eigen::MatrixXd solve_z(const Eigen::MatrixXd& y, const Eigen::MatrixXd& yhat,
                        const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2,
                        double lambda, Mapping mapping) {
  if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
  Eigen::MatrixXd a = w2.transpose() * w2;
  a.diagonal().array() += lambda;
  const Eigen::MatrixXd rhs =
      w2.transpose() * y + lambda * apply_mapping(mapping, w1 * yhat);
  return a.llt().solve(rhs);
}

DaeModel train(const Eigen::MatrixXd& y, const Eigen::MatrixXd& yhat,
               const TrainConfig& cfg) {
  if (y.rows() != yhat.rows() || y.cols() != yhat.cols())
    throw std::invalid_argument("clean/corrupt matrices must share shape");
  if (y.cols() < 1) throw std::invalid_argument("empty training set");
  if (cfg.r < 1) throw std::invalid_argument("rank must be >= 1");
  if (cfg.lambda <= 0.0) throw std::invalid_argument("lambda must be positive");

  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n = y.rows();

  DaeModel model;
  model.mapping = cfg.mapping;
  model.lambda = cfg.lambda;

  std::mt19937_64 rng = make_rng(cfg.init_seed, 0xdaeULL);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(double(n)));
  Eigen::MatrixXd w1(cfg.r, n);
  for (Eigen::Index i = 0; i < w1.rows(); ++i)
    for (Eigen::Index j = 0; j < w1.cols(); ++j) w1(i, j) = normal(rng);

  const InputFactorization fact(yhat, cfg.ridge_scale);
  Eigen::MatrixXd z = apply_mapping(cfg.mapping, w1 * yhat);
  Eigen::MatrixXd w2 = solve_w2(y, z, cfg.ridge_scale);

  double j_prev = dae_objective(y, yhat, w1, w2, z, cfg.lambda, cfg.mapping);
  if (!std::isfinite(j_prev)) throw std::runtime_error("training diverged");

  Eigen::MatrixXd w1_keep = w1, w2_keep = w2, z_keep = z;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    w1_keep = w1;
    w2_keep = w2;
    z_keep = z;

    w1 = solve_w1(z, fact, yhat, cfg.mapping, &w1, &model.clamp_count);
    w2 = solve_w2(y, z, cfg.ridge_scale);
    z = solve_z(y, yhat, w1, w2, cfg.lambda, cfg.mapping);

    const double j = dae_objective(y, yhat, w1, w2, z, cfg.lambda, cfg.mapping);
    if (!std::isfinite(j)) throw std::runtime_error("training diverged");
    if (j > j_prev) {
      // Alternation stalled at the ridge-bias level; keep the better state.
      w1 = w1_keep;
      w2 = w2_keep;
      z = z_keep;
      break;
    }
    model.objective_log.push_back(j);
    const double drop = j_prev - j;
    j_prev = j;
    if (drop <= cfg.tol * std::max(j_prev, 1e-300)) break;
  }
  if (model.objective_log.empty()) model.objective_log.push_back(j_prev);

  model.w1 = std::move(w1);
  model.w2 = std::move(w2);
  model.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return model;
}

Eigen::MatrixXd denoise(const DaeModel& model, const Eigen::MatrixXd& yhat,
                        bool renormalize) {
  Eigen::MatrixXd out = decode(model, encode(model, yhat));
  out = out.cwiseMax(0.0);
  if (renormalize)
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const double peak = out.col(j).maxCoeff();
      if (peak > 0.0) out.col(j) /= peak;
    }
  return out;
}

namespace {

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::vector<double> buf(static_cast<std::size_t>(m.rows()) * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      buf[static_cast<std::size_t>(i) * m.cols() + j] = m(i, j);
  write_array(path, {m.rows(), m.cols()}, buf);
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  const ArrayData arr = read_array(path);
  if (arr.dtype != Dtype::f64 || arr.shape.size() != 2)
    throw std::runtime_error(path + ": expected a 2D f64 array");
  Eigen::MatrixXd m(arr.shape[0], arr.shape[1]);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = arr.reals[static_cast<std::size_t>(i) * m.cols() + j];
  return m;
}

}  // namespace

void save_model(const std::string& dir, const DaeModel& model) {
  std::filesystem::create_directories(dir);
  write_matrix(dir + "/W1.arr", model.w1);
  write_matrix(dir + "/W2.arr", model.w2);
  json meta;
  meta["mapping"] = to_string(model.mapping);
  meta["lambda"] = model.lambda;
  meta["clamp_count"] = model.clamp_count;
  meta["train_seconds"] = model.train_seconds;
  meta["objective_log"] = model.objective_log;
  std::ofstream out(dir + "/meta.json");
  if (!out) throw std::runtime_error(dir + ": cannot write meta.json");
  out << meta.dump(2) << "\n";
}

DaeModel load_model(const std::string& dir) {
  DaeModel model;
  model.w1 = read_matrix(dir + "/W1.arr");
  model.w2 = read_matrix(dir + "/W2.arr");
  std::ifstream in(dir + "/meta.json");
  if (!in) throw std::runtime_error(dir + ": missing meta.json");
  const json meta = json::parse(in);
  model.mapping = mapping_from_string(meta.at("mapping").get<std::string>());
  model.lambda = meta.at("lambda").get<double>();
  model.clamp_count = meta.value("clamp_count", std::int64_t{0});
  model.train_seconds = meta.value("train_seconds", 0.0);
  model.objective_log = meta.value("objective_log", std::vector<double>{});
  if (model.w2.rows() != model.w1.cols() || model.w2.cols() != model.w1.rows())
    throw std::runtime_error(dir + ": inconsistent W1/W2 shapes");
  return model;
}

}  // namespace twri
