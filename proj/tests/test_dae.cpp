#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "twri/dae.hpp"

using namespace twri;
using Eigen::MatrixXd;

namespace {

MatrixXd random_matrix(int rows, int cols, std::uint64_t seed,
                       double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = g(rng);
  return m;
}

// Projected-gradient reference minimizer for ||T - W A||_F^2 with step 1/L.
MatrixXd gd_lstsq(const MatrixXd& t, const MatrixXd& a, int iters) {
  MatrixXd w = MatrixXd::Zero(t.rows(), a.rows());
  const MatrixXd gram = a * a.transpose();
  const double lips = 2.0 * gram.operatorNorm();
  for (int i = 0; i < iters; ++i) {
    const MatrixXd grad = 2.0 * (w * a - t) * a.transpose();
    w -= grad / lips;
  }
  return w;
}

}  // namespace

TEST_CASE("mappings apply, invert, and clamp as documented") {
  MatrixXd x(2, 2);
  x << -0.5, 0.0, 0.3, 1.2;
  CHECK(apply_mapping(Mapping::linear, x) == x);
  const MatrixXd th = apply_mapping(Mapping::tanh_fn, x);
  CHECK(th(0, 0) == doctest::Approx(std::tanh(-0.5)).epsilon(1e-12));
  const MatrixXd sg = apply_mapping(Mapping::sigmoid, x);
  CHECK(sg(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sg(1, 1) == doctest::Approx(1.0 / (1.0 + std::exp(-1.2))).epsilon(1e-12));

  for (Mapping m : {Mapping::linear, Mapping::tanh_fn, Mapping::sigmoid}) {
    MatrixXd safe(2, 2);
    safe << 0.1, 0.4, 0.25, 0.6;  // in range for every inverse
    std::int64_t clamps = 0;
    const MatrixXd round =
        apply_mapping(m, apply_inverse_mapping(m, safe, &clamps));
    CHECK((round - safe).norm() < 1e-10);
    CHECK(clamps == 0);
  }

  std::int64_t clamps = 0;
  MatrixXd wild(1, 3);
  wild << 1.2, -0.1, 0.5;
  apply_inverse_mapping(Mapping::sigmoid, wild, &clamps);
  CHECK(clamps == 2);
  clamps = 0;
  apply_inverse_mapping(Mapping::tanh_fn, wild, &clamps);
  CHECK(clamps == 1);

  CHECK(mapping_from_string("tanh") == Mapping::tanh_fn);
  CHECK(to_string(Mapping::sigmoid) == "sigmoid");
  CHECK_THROWS(mapping_from_string("relu"));
}

TEST_CASE("encode and decode are the documented matrix maps") {
  DaeModel model;
  model.w1 = MatrixXd(2, 3);
  model.w1 << 1, 0, 1, 0, 2, 0;
  model.w2 = MatrixXd(3, 2);
  model.w2 << 1, 0, 0, 1, 1, 1;
  model.mapping = Mapping::linear;
  MatrixXd yhat(3, 1);
  yhat << 1, 2, 3;
  const MatrixXd z = encode(model, yhat);
  CHECK(z(0, 0) == doctest::Approx(4.0));
  CHECK(z(1, 0) == doctest::Approx(4.0));
  const MatrixXd y = decode(model, z);
  CHECK(y(2, 0) == doctest::Approx(8.0));

  model.mapping = Mapping::tanh_fn;
  CHECK(encode(model, yhat)(0, 0) == doctest::Approx(std::tanh(4.0)));
}

TEST_CASE("the objective matches its definition") {
  const MatrixXd y = random_matrix(4, 3, 1);
  const MatrixXd yhat = random_matrix(4, 3, 2);
  const MatrixXd w1 = random_matrix(2, 4, 3);
  const MatrixXd w2 = random_matrix(4, 2, 4);
  const MatrixXd z = random_matrix(2, 3, 5);
  const double lambda = 0.7;
  const MatrixXd proj = apply_mapping(Mapping::tanh_fn, w1 * yhat);
  const double want = (y - w2 * z).squaredNorm() +
                      lambda * (z - proj).squaredNorm();
  CHECK(dae_objective(y, yhat, w1, w2, z, lambda, Mapping::tanh_fn) ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("the encoder solve satisfies least-squares optimality") {
  const MatrixXd yhat = random_matrix(6, 9, 11);
  const MatrixXd z = random_matrix(4, 9, 12);
  const MatrixXd w1 = solve_w1(z, yhat, Mapping::linear);
  const MatrixXd resid = (z - w1 * yhat) * yhat.transpose();
  CHECK(resid.norm() < 1e-5 * z.norm() * yhat.norm());

  // Closed form beats (or ties) a long gradient-descent run.
  const MatrixXd w_gd = gd_lstsq(z, yhat, 4000);
  const double j_solve = (z - w1 * yhat).squaredNorm();
  const double j_gd = (z - w_gd * yhat).squaredNorm();
  CHECK(j_solve <= j_gd + 1e-6);
}

TEST_CASE("the cached factorization matches the one-shot solve") {
  const MatrixXd yhat = random_matrix(6, 9, 21);
  const MatrixXd z = random_matrix(4, 9, 22);
  const InputFactorization f(yhat);
  const MatrixXd a = solve_w1(z, yhat, Mapping::linear);
  const MatrixXd b = solve_w1(z, f, yhat, Mapping::linear, nullptr);
  CHECK((a - b).norm() < 1e-10 * a.norm());
  // apply_pinv_right is a right-multiplication by the pseudo-inverse.
  const MatrixXd pinv =
      yhat.completeOrthogonalDecomposition().pseudoInverse();
  CHECK((f.apply_pinv_right(z) - z * pinv).norm() < 1e-6 * z.norm());
}

TEST_CASE("nonlinear encoder steps never worsen the data fit") {
  const MatrixXd yhat = random_matrix(5, 8, 31);
  const MatrixXd z =
      apply_mapping(Mapping::sigmoid, random_matrix(3, 8, 32, 0.5));
  const InputFactorization f(yhat);
  MatrixXd prev = random_matrix(3, 5, 33, 0.2);
  const double before =
      (z - apply_mapping(Mapping::sigmoid, prev * yhat)).squaredNorm();
  const MatrixXd w1 =
      solve_w1(z, f, yhat, Mapping::sigmoid, &prev);
  const double after =
      (z - apply_mapping(Mapping::sigmoid, w1 * yhat)).squaredNorm();
  CHECK(after <= before + 1e-12);
}

TEST_CASE("the decoder solve satisfies least-squares optimality") {
  const MatrixXd y = random_matrix(7, 10, 41);
  const MatrixXd z = random_matrix(3, 10, 42);
  const MatrixXd w2 = solve_w2(y, z);
  const MatrixXd resid = (y - w2 * z) * z.transpose();
  CHECK(resid.norm() < 1e-5 * y.norm() * z.norm());

  // Z = I recovers Y; zero data gives a zero decoder.
  const MatrixXd eye = MatrixXd::Identity(4, 4);
  const MatrixXd yy = random_matrix(5, 4, 43);
  CHECK((solve_w2(yy, eye) - yy).norm() < 1e-6 * yy.norm());
  CHECK(solve_w2(MatrixXd::Zero(5, 4), random_matrix(3, 4, 44)).norm() == 0.0);
}

TEST_CASE("the code solve zeroes the coupled gradient") {
  const MatrixXd y = random_matrix(6, 8, 51);
  const MatrixXd yhat = random_matrix(6, 8, 52);
  const MatrixXd w1 = random_matrix(4, 6, 53);
  const MatrixXd w2 = random_matrix(6, 4, 54);
  for (const double lambda : {0.3, 1.0, 17.0}) {
    const MatrixXd z = solve_z(y, yhat, w1, w2, lambda, Mapping::tanh_fn);
    const MatrixXd proj = apply_mapping(Mapping::tanh_fn, w1 * yhat);
    const MatrixXd grad =
        w2.transpose() * (w2 * z - y) + lambda * (z - proj);
    CHECK(grad.norm() < 1e-9 * (1.0 + z.norm()));
  }

  // With no decoder the code is exactly the projected input.
  const MatrixXd z0 = solve_z(y, yhat, w1, MatrixXd::Zero(6, 4), 2.0,
                              Mapping::sigmoid);
  const MatrixXd proj = apply_mapping(Mapping::sigmoid, w1 * yhat);
  CHECK((z0 - proj).norm() < 1e-12);

  // Huge lambda pins the code to the projection as well.
  const MatrixXd zb = solve_z(y, yhat, w1, w2, 1e10, Mapping::linear);
  CHECK((zb - w1 * yhat).norm() < 1e-4 * (1.0 + zb.norm()));
}

TEST_CASE("training descends monotonically and is seed-deterministic") {
  const MatrixXd y = random_matrix(12, 9, 61);
  const MatrixXd yhat = y + random_matrix(12, 9, 62, 0.1);
  TrainConfig cfg;
  cfg.r = 5;
  cfg.max_sweeps = 40;
  cfg.tol = 1e-12;
  const DaeModel m1 = train(y, yhat, cfg);
  REQUIRE(m1.objective_log.size() >= 2);
  for (std::size_t i = 1; i < m1.objective_log.size(); ++i)
    CHECK(m1.objective_log[i] <=
          m1.objective_log[i - 1] + 1e-9 * (1.0 + m1.objective_log[i - 1]));

  const DaeModel m2 = train(y, yhat, cfg);
  CHECK((m1.w1 - m2.w1).norm() == 0.0);
  CHECK((m1.w2 - m2.w2).norm() == 0.0);

  TrainConfig other = cfg;
  other.init_seed = 99;
  const DaeModel m3 = train(y, yhat, other);
  CHECK((m1.w1 - m3.w1).norm() > 0.0);
}

TEST_CASE("a full-rank code reconstructs clean training data") {
  const MatrixXd y = random_matrix(10, 5, 71);
  TrainConfig cfg;
  cfg.r = 6;
  cfg.max_sweeps = 50;
  cfg.tol = 1e-14;
  const DaeModel model = train(y, y, cfg);
  // denoise() clamps to >= 0, which would break the comparison against a
  // signed target, so check the raw decode.
  const MatrixXd raw = decode(model, encode(model, y));
  CHECK((raw - y).norm() / y.norm() < 1e-6);
  CHECK(model.train_seconds >= 0.0);
}

TEST_CASE("denoising clamps and renormalizes per column") {
  DaeModel model;
  model.w1 = MatrixXd::Identity(2, 2);
  model.w2 = MatrixXd::Identity(2, 2);
  model.mapping = Mapping::linear;
  MatrixXd yhat(2, 3);
  yhat << 2.0, -1.0, 0.0, -3.0, 0.5, 0.0;
  const MatrixXd out = denoise(model, yhat, true);
  CHECK(out(0, 0) == doctest::Approx(1.0));
  CHECK(out(1, 0) == 0.0);
  CHECK(out(0, 1) == 0.0);
  CHECK(out(1, 1) == doctest::Approx(1.0));
  CHECK(out(0, 2) == 0.0);  // all-zero column survives untouched
  CHECK(out(1, 2) == 0.0);
  const MatrixXd raw = denoise(model, yhat, false);
  CHECK(raw(0, 0) == doctest::Approx(2.0));
  CHECK(raw(1, 0) == 0.0);
}

TEST_CASE("models round trip through the on-disk format") {
  DaeModel model;
  model.w1 = random_matrix(3, 6, 81);
  model.w2 = random_matrix(6, 3, 82);
  model.mapping = Mapping::sigmoid;
  model.lambda = 2.5;
  model.objective_log = {5.0, 1.0, 0.5};
  model.clamp_count = 7;

  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "dae_rt").string();
  fs::remove_all(dir);
  save_model(dir, model);
  const DaeModel back = load_model(dir);
  CHECK((back.w1 - model.w1).norm() == 0.0);
  CHECK((back.w2 - model.w2).norm() == 0.0);
  CHECK(back.mapping == Mapping::sigmoid);
  CHECK(back.lambda == doctest::Approx(2.5));
  REQUIRE(back.objective_log.size() == 3);
  CHECK(back.objective_log[2] == doctest::Approx(0.5));
  fs::remove_all(dir);
  CHECK_THROWS(load_model(dir));
}
