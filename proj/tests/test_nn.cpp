#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "grcgan/error.hpp"
#include "grcgan/nn/adam.hpp"
#include "grcgan/nn/checkpoint.hpp"
#include "grcgan/nn/gradcheck.hpp"
#include "grcgan/nn/network.hpp"
#include "grcgan/nn/ops.hpp"
#include <fstream>
#include <limits>

using namespace grcgan;
using nn::Matrix;
using nn::Tensor;

namespace {

nn::MlpSpec single_dense(std::size_t in, std::size_t out, nn::Activation act) {
  return nn::MlpSpec{in, {}, out, act};
}

}  // namespace

TEST_CASE("forward through one dense layer applies W x + b") {
  nn::Network net(single_dense(3, 3, nn::Activation::identity()));
  net.blocks()[0].dense.weight.mutable_value() = 2.0 * Matrix::Identity(3, 3);
  Matrix in(1, 3);
  in << 1, 2, 3;
  const Matrix out = net.forward(Tensor::constant(in), nn::Mode::train).value();
  CHECK(out(0, 0) == 2.0);
  CHECK(out(0, 1) == 4.0);
  CHECK(out(0, 2) == 6.0);
}

TEST_CASE("zero weights with a sigmoid output give 0.5 everywhere") {
  nn::Network net(nn::MlpSpec{3, {{4, nn::Activation::relu(), false}}, 2, nn::Activation::sigmoid()});
  Rng rng = make_rng(3);
  const Matrix out = net.forward(Tensor::constant(standard_normal(5, 3, rng)), nn::Mode::train).value();
  CHECK((out.array() == 0.5).all());
}

TEST_CASE("circular generator preset maps 128 x 4 to 128 x 2") {
  Rng rng = make_rng(1);
  nn::Network g(nn::MlpSpec::circular_generator(), rng);
  const auto out = g.forward(Tensor::constant(standard_normal(128, 4, rng)), nn::Mode::train);
  CHECK(out.rows() == 128);
  CHECK(out.cols() == 2);
  CHECK(nn::MlpSpec::circular_generator().hidden.size() == 6);
  CHECK(nn::MlpSpec::circular_discriminator().hidden.size() == 5);
  CHECK(nn::MlpSpec::circular_discriminator().output_activation.kind == nn::Activation::Kind::sigmoid);
  const auto mvn_g = nn::MlpSpec::mvn_generator(8, 2);
  CHECK(mvn_g.input_dim == 10);
  CHECK(mvn_g.output_dim == 2);
  CHECK(mvn_g.hidden.size() == 3);
  CHECK(mvn_g.hidden[0].width == 512);
  CHECK(mvn_g.hidden[0].activation.slope == 0.1);
  CHECK(nn::MlpSpec::mvn_discriminator(10).output_activation.kind == nn::Activation::Kind::identity);
}

TEST_CASE("forward rejects a wrong input width") {
  Rng rng = make_rng(1);
  nn::Network net(single_dense(3, 2, nn::Activation::identity()), rng);
  CHECK_THROWS_AS(net.forward(Tensor::constant(Matrix::Zero(2, 4)), nn::Mode::train), ShapeError);
  CHECK_THROWS_AS(net.predict(Matrix::Zero(2, 4)), ShapeError);
}

TEST_CASE("forward rejects non-finite outputs") {
  nn::Network net(single_dense(1, 1, nn::Activation::identity()));
  net.blocks()[0].dense.weight.mutable_value()(0, 0) = 1.0;
  Matrix in(1, 1);
  in(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(net.forward(Tensor::constant(in), nn::Mode::train), NonFiniteError);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS((nn::MlpSpec{2, {{0, nn::Activation::relu(), false}}, 1, {}}.validate()), ConfigError);
  CHECK_THROWS_AS((nn::MlpSpec{2, {{3, nn::Activation::leaky_relu(1.5), false}}, 1, {}}.validate()), ConfigError);
  CHECK_THROWS_AS((nn::MlpSpec{2, {{3, nn::Activation::leaky_relu(0.0), false}}, 1, {}}.validate()), ConfigError);
}

TEST_CASE("gradient of sum(x W) with respect to W is x broadcast per column") {
  Rng rng = make_rng(2);
  const Matrix x = standard_normal(1, 3, rng);
  Tensor w = Tensor::parameter(standard_normal(3, 2, rng));
  nn::sum(nn::matmul(Tensor::constant(x), w)).backward();
  const Matrix g = w.grad();
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < 3; ++r) CHECK(g(r, c) == doctest::Approx(x(0, r)));
  }
}

TEST_CASE("mean squared error on a dense net matches central differences") {
  Rng rng = make_rng(4);
  nn::Network net(single_dense(3, 2, nn::Activation::identity()), rng);
  const Matrix x = standard_normal(5, 3, rng);
  const Matrix y = standard_normal(5, 2, rng);
  const auto loss = [&] {
    return nn::mean(nn::square(nn::sub(net.forward(Tensor::constant(x), nn::Mode::train), Tensor::constant(y))));
  };
  for (auto& p : net.parameters()) {
    const auto r = nn::check_gradient("p", loss, p, 1e-5, 1e-4);
    CHECK(r.passed);
    CHECK(r.relative_error < 1e-4);
    net.zero_grad();
  }
}

TEST_CASE("a parameter the loss ignores gets a zero gradient") {
  Tensor a = Tensor::parameter(Matrix::Ones(2, 2));
  Tensor unused = Tensor::parameter(Matrix::Ones(2, 2));
  Tensor both = nn::add(a, nn::scale(unused, 0.0));
  nn::sum(both).backward();
  CHECK(unused.grad().isZero());
  CHECK(a.grad().isApprox(Matrix::Ones(2, 2)));
}

TEST_CASE("backward accumulates until reset and refuses a freed graph") {
  Tensor w = Tensor::parameter(Matrix::Constant(1, 1, 3.0));
  Tensor loss1 = nn::sum(nn::square(w));
  loss1.backward();
  CHECK(w.grad()(0, 0) == doctest::Approx(6.0));
  CHECK_THROWS_AS(loss1.backward(), GraphError);
  nn::sum(nn::square(w)).backward();
  CHECK(w.grad()(0, 0) == doctest::Approx(12.0));
  w.zero_grad();
  CHECK(w.grad()(0, 0) == 0.0);
  Tensor wide = Tensor::parameter(Matrix::Ones(2, 2));
  CHECK_THROWS_AS(nn::square(wide).backward(), GraphError);
}

TEST_CASE("no-grad mode records nothing") {
  Tensor w = Tensor::parameter(Matrix::Ones(1, 1));
  nn::NoGradGuard guard;
  Tensor out = nn::square(w);
  CHECK_FALSE(out.requires_grad());
}

TEST_CASE("Adam first step moves each coordinate by about lr") {
  Tensor p = Tensor::parameter(Matrix::Zero(1, 1));
  nn::Adam adam({p}, {5e-5, 0.5, 0.999, 1e-8});
  p.accumulate_grad(Matrix::Ones(1, 1));
  adam.step();
  // m_hat = 1, v_hat = 1, step = lr * 1 / (1 + eps)
  CHECK(p.value()(0, 0) == doctest::Approx(-5e-5 / (1.0 + 1e-8)).epsilon(1e-12));
  CHECK(adam.state().step == 1);
}

TEST_CASE("Adam leaves parameters alone when every gradient is zero") {
  Rng rng = make_rng(9);
  const Matrix start = standard_normal(3, 3, rng);
  Tensor p = Tensor::parameter(start);
  nn::Adam adam({p}, {1e-3, 0.5, 0.999, 1e-8});
  adam.step();
  CHECK(p.value() == start);
}

TEST_CASE("two Adam steps with g differ from one step with 2g") {
  const auto run = [](const std::vector<double>& grads) {
    Tensor p = Tensor::parameter(Matrix::Zero(1, 1));
    nn::Adam adam({p}, {0.1, 0.5, 0.999, 1e-8});
    for (double g : grads) {
      adam.zero_grad();
      p.accumulate_grad(Matrix::Constant(1, 1, g));
      adam.step();
    }
    return p.value()(0, 0);
  };
  const double twice = run({1.0, 1.0});
  const double doubled = run({2.0});
  // Hand trace: one step of any nonzero g moves by lr; two steps of g by 2 lr.
  CHECK(twice == doctest::Approx(-0.2).epsilon(1e-6));
  CHECK(doubled == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(twice != doctest::Approx(doubled));
}

TEST_CASE("Adam rejects a non-finite gradient without touching state") {
  Tensor p = Tensor::parameter(Matrix::Ones(1, 2));
  nn::Adam adam({p}, {0.1, 0.5, 0.999, 1e-8});
  Matrix g(1, 2);
  g << 1.0, std::numeric_limits<double>::quiet_NaN();
  p.accumulate_grad(g);
  CHECK_THROWS_AS(adam.step(), NonFiniteError);
  CHECK(p.value() == Matrix::Ones(1, 2));
  CHECK(adam.state().step == 0);
}

TEST_CASE("batch norm in eval mode is a fixed affine map") {
  Rng rng = make_rng(11);
  nn::Network net(nn::MlpSpec{3, {{4, nn::Activation::identity(), true}}, 2, nn::Activation::identity()}, rng);
  for (int i = 0; i < 5; ++i) net.forward(Tensor::constant(standard_normal(16, 3, rng)), nn::Mode::train);
  const Matrix a = standard_normal(7, 3, rng);
  const Matrix b = standard_normal(9, 3, rng);
  Matrix both(16, 3);
  both << a, b;
  const Matrix out_both = net.predict(both);
  CHECK(out_both.topRows(7).isApprox(net.predict(a), 1e-14));
  CHECK(out_both.bottomRows(9).isApprox(net.predict(b), 1e-14));
  // Affinity: f(0.5 u + 0.5 v) = 0.5 f(u) + 0.5 f(v).
  const Matrix mid = 0.5 * (a.row(0) + a.row(1));
  const Matrix lhs = net.predict(mid);
  const Matrix rhs = 0.5 * (net.predict(a.row(0)) + net.predict(a.row(1)));
  CHECK(lhs.isApprox(rhs, 1e-12));
}

TEST_CASE("running statistics follow r <- 0.9 r + 0.1 batch with unbiased variance") {
  Rng rng = make_rng(12);
  nn::Network net(nn::MlpSpec{2, {{2, nn::Activation::identity(), true}}, 1, nn::Activation::identity()}, rng);
  net.blocks()[0].dense.weight.mutable_value() = Matrix::Identity(2, 2);
  net.blocks()[0].dense.bias.mutable_value().setZero();
  Matrix x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  net.forward(Tensor::constant(x), nn::Mode::train);
  const auto& bn = *net.blocks()[0].batch_norm;
  CHECK(bn.running_mean(0) == doctest::Approx(0.1 * 4.0));
  CHECK(bn.running_mean(1) == doctest::Approx(0.1 * 5.0));
  // unbiased variance of {1,3,5,7} is 20/3
  CHECK(bn.running_var(0) == doctest::Approx(0.9 + 0.1 * 20.0 / 3.0));
}

TEST_CASE("batch-norm training forward uses the biased batch variance") {
  Matrix x(4, 1);
  x << 1, 3, 5, 7;
  Tensor out = nn::batch_norm_train(Tensor::constant(x), Tensor::constant(Matrix::Ones(1, 1)),
                                    Tensor::constant(Matrix::Zero(1, 1)), 0.0, nullptr, nullptr);
  CHECK(out.value()(0, 0) == doctest::Approx(-3.0 / std::sqrt(5.0)));
}

TEST_CASE("identical seeds give bit-identical networks and forwards") {
  Rng a = make_rng(77), b = make_rng(77);
  nn::Network na(nn::MlpSpec::circular_generator(), a);
  nn::Network nb(nn::MlpSpec::circular_generator(), b);
  Rng c = make_rng(5);
  const Matrix x = standard_normal(32, 4, c);
  CHECK(na.forward(Tensor::constant(x), nn::Mode::train).value() ==
        nb.forward(Tensor::constant(x), nn::Mode::train).value());
}

TEST_CASE("weight init is uniform within 1/sqrt(fan_in) and BN starts at identity") {
  Rng rng = make_rng(8);
  nn::Network net(nn::MlpSpec::circular_generator(), rng);
  const auto& first = net.blocks()[0];
  CHECK(first.dense.weight.value().cwiseAbs().maxCoeff() <= 0.5);
  const auto& second = net.blocks()[1];
  CHECK(second.dense.weight.value().cwiseAbs().maxCoeff() <= 0.1);
  CHECK(second.dense.weight.value().cwiseAbs().maxCoeff() > 0.09);
  CHECK(first.batch_norm->gamma.value().isOnes());
  CHECK(first.batch_norm->beta.value().isZero());
}

TEST_CASE("checkpoint round trip is bit exact") {
  Rng rng = make_rng(21);
  nn::Network net(nn::MlpSpec::circular_generator(), rng);
  for (int i = 0; i < 3; ++i) net.forward(Tensor::constant(standard_normal(20, 4, rng)), nn::Mode::train);
  const auto path = std::filesystem::temp_directory_path() / "grcgan_ckpt_test.bin";
  nn::save_checkpoint(path, net, rng);
  auto loaded = nn::load_checkpoint(path);
  std::filesystem::remove(path);
  CHECK(loaded.network.spec() == net.spec());
  CHECK(loaded.rng == rng);
  const Matrix x = standard_normal(10, 4, rng);
  CHECK(loaded.network.predict(x) == net.predict(x));
}

TEST_CASE("loading a corrupt checkpoint fails") {
  const auto path = std::filesystem::temp_directory_path() / "grcgan_bad_ckpt.bin";
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOTACHECKPOINT";
  }
  CHECK_THROWS(nn::load_checkpoint(path));
  std::filesystem::remove(path);
}

TEST_CASE("every layer kind passes central-difference checks on inputs and parameters") {
  Rng rng = make_rng(31);
  const std::vector<nn::Activation> kinds = {nn::Activation::relu(), nn::Activation::leaky_relu(0.2),
                                             nn::Activation::sigmoid(), nn::Activation::identity()};
  for (const auto& act : kinds) {
    for (bool bn : {false, true}) {
      nn::Network net(nn::MlpSpec{3, {{4, act, bn}}, 2, nn::Activation::identity()}, rng);
      Tensor x = Tensor::parameter(standard_normal(6, 3, rng));
      const Matrix y = standard_normal(6, 2, rng);
      const auto loss = [&] {
        return nn::mean(nn::square(nn::sub(net.forward(x, nn::Mode::train), Tensor::constant(y))));
      };
      auto params = net.parameters();
      params.push_back(x);
      for (auto& p : params) {
        CHECK(nn::check_gradient("p", loss, p, 1e-5, 1e-4).passed);
        net.zero_grad();
        x.zero_grad();
      }
    }
  }
}

TEST_CASE("gradient check of an empty parameter passes vacuously") {
  Tensor empty = Tensor::parameter(Matrix(0, 0));
  Tensor w = Tensor::parameter(Matrix::Ones(1, 1));
  const auto r = nn::check_gradient("empty", [&] { return nn::sum(w); }, empty, 1e-5, 1e-4);
  CHECK(r.passed);
  CHECK(r.relative_error == 0.0);
}

TEST_CASE("ops reject mismatched shapes") {
  Tensor a = Tensor::constant(Matrix::Zero(2, 3));
  Tensor b = Tensor::constant(Matrix::Zero(3, 2));
  CHECK_THROWS_AS(nn::add(a, b), ShapeError);
  CHECK_THROWS_AS(nn::matmul(a, a), ShapeError);
  CHECK_THROWS_AS(nn::linear(a, b, Tensor::constant(Matrix::Zero(1, 3))), ShapeError);
}

TEST_CASE("row_norm has a zero gradient on zero rows") {
  Tensor x = Tensor::parameter(Matrix::Zero(2, 3));
  x.mutable_value().row(1) << 3, 4, 0;
  nn::sum(nn::row_norm(x)).backward();
  CHECK(x.grad().row(0).isZero());
  CHECK(x.grad()(1, 0) == doctest::Approx(0.6));
}
