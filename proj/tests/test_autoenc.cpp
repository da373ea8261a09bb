#include "doctest.h"

#include "auginf/autoenc/autoencoder.hpp"
#include "auginf/error.hpp"
#include "auginf/numerics/gradcheck.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace auginf;
using namespace auginf::ae;
using nn::Tensor2;
using nn::Var;

namespace {

// Two 10-node rings with one chord each, joined by a single bridge.
oracle::Dense relu(oracle::Dense d) {
  for (auto& r : d) for (double& v : r) v = std::max(0.0, v);
  return d;
}

}  // namespace

TEST_CASE("gae_encode") {
  Rng rng(4);
  SUBCASE("zero features give zero embedding") {
    GaeModel m(3, 5, 2, rng);
    nn::Tape t(nn::Mode::kEval);
    CHECK(m.encode(t.constant(Tensor2(4, 3)), t.constant(gnn::normalized_adjacency(Tensor2(4, 4)))).value() ==
          Tensor2(4, 2));
  }
  SUBCASE("single node with unit weights returns its feature") {
    GaeModel m(1, 1, 1, rng);
    m.w0().value = Tensor2(1, 1, 1.0);
    m.w1().value = Tensor2(1, 1, 1.0);
    nn::Tape t(nn::Mode::kEval);
    CHECK(m.encode(t.constant(Tensor2(1, 1, 0.37)), t.constant(Tensor2(1, 1, 1.0))).value().item() == 0.37);
  }
  SUBCASE("random 4-node instances match the dense oracle") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng r(seed);
      GaeModel m(3, 5, 2, r);
      const auto a = oracle::random_adjacency(r, 4, 0.5);
      const auto x = oracle::random_dense(r, 4, 3);
      const auto ahat = oracle::normalized_adjacency(a);
      const auto expect = oracle::matmul(
          oracle::matmul(ahat, relu(oracle::matmul(oracle::matmul(ahat, x), oracle::to_dense(m.w0().value)))),
          oracle::to_dense(m.w1().value));
      nn::Tape t(nn::Mode::kEval);
      const Tensor2 z = m.encode(t.constant(oracle::to_tensor(x)), t.constant(oracle::to_tensor(ahat))).value();
      CHECK(oracle::max_diff(expect, z) <= 1e-12);
    }
  }
}

TEST_CASE("inner_product_decode") {
  CHECK(inner_product_decode(Tensor2(3, 2)) == Tensor2(3, 3, 0.5));
  const Tensor2 m = inner_product_decode(Tensor2::identity(2));
  CHECK(m(0, 0) == doctest::Approx(0.73106).epsilon(1e-5));
  CHECK(m(1, 1) == doctest::Approx(0.73106).epsilon(1e-5));
  CHECK(m(0, 1) == 0.5);
  CHECK(m(1, 0) == 0.5);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng r(seed);
    const auto z = oracle::random_dense(r, 6, 3, -2, 2);
    auto expect = oracle::matmul(z, oracle::transpose(z));
    for (auto& row : expect) for (double& v : row) v = oracle::sigmoid(v);
    const Tensor2 got = inner_product_decode(oracle::to_tensor(z));
    CHECK(oracle::max_diff(expect, got) <= 1e-12);
    CHECK(got == Tensor2(nn::Matrix(got.mat().transpose())));
    for (double v : got.data()) CHECK((v > 0.0 && v < 1.0));
  }
}

TEST_CASE("reconstruction_ce") {
  nn::Tape t;
  const Tensor2 a = Tensor2::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}});
  SUBCASE("uniform 0.5 unweighted is ln 2") {
    CHECK(reconstruction_ce(t.constant(Tensor2(3, 3, 0.5)), a, 1.0).value().item() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
  }
  SUBCASE("saturated prediction") {
    Tensor2 m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = a(i, j) != 0 ? 1 - 1e-9 : 1e-9;
    CHECK(reconstruction_ce(t.constant(m), a).value().item() <= 2.1e-8);
  }
  SUBCASE("weighted 3-node case against a hand sum") {
    // Off-diagonal pairs: 2 ones, 4 zeros, so positives weigh 4/2 = 2.
    double sum = 0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) sum += (a(i, j) != 0 ? 2.0 : 1.0) * -std::log(0.5);
    CHECK(positive_weight(a) == 2.0);
    CHECK(reconstruction_ce(t.constant(Tensor2(3, 3, 0.5)), a).value().item() ==
          doctest::Approx(sum / 6.0).epsilon(1e-14));
    CHECK(reconstruction_ce_logits(t.constant(Tensor2(3, 3)), a).value().item() ==
          doctest::Approx(4.0 / 3.0 * std::log(2.0)).epsilon(1e-14));
  }
  SUBCASE("no positives is a config error") {
    CHECK_THROWS_AS(reconstruction_ce(t.constant(Tensor2(3, 3, 0.5)), Tensor2(3, 3)), ConfigError);
  }
  SUBCASE("logit and probability forms agree") {
    Rng r(9);
    const auto logits = oracle::to_tensor(oracle::random_dense(r, 5, 5, -3, 3));
    Tensor2 probs = logits;
    for (double& v : probs.data()) v = oracle::sigmoid(v);
    const Tensor2 target = gnn::attention_mask(Tensor2::from_rows(
        {{0, 1, 0, 0, 0}, {1, 0, 1, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 0, 0, 1}, {0, 0, 0, 1, 0}}));
    Tensor2 tgt = target;
    for (std::size_t i = 0; i < 5; ++i) tgt(i, i) = 0;
    CHECK(reconstruction_ce(t.constant(probs), tgt).value().item() ==
          doctest::Approx(reconstruction_ce_logits(t.constant(logits), tgt).value().item()).epsilon(1e-12));
  }
}

TEST_CASE("kld") {
  nn::Tape t;
  CHECK(kld(t.constant(Tensor2(4, 3)), t.constant(Tensor2(4, 3))).value().item() == 0.0);
  CHECK(kld(t.constant(Tensor2(1, 1, 1.0)), t.constant(Tensor2(1, 1, 0.0))).value().item() == 0.5);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng r(seed);
    const double v = kld(t.constant(oracle::to_tensor(oracle::random_dense(r, 3, 2, -2, 2))),
                         t.constant(oracle::to_tensor(oracle::random_dense(r, 3, 2, -3, 3))))
                         .value()
                         .item();
    CHECK(v > 1e-12);
  }
}

TEST_CASE("vgae_encode") {
  Rng rng(5);
  VgaeModel m(3, 6, 2, rng);
  const Tensor2 x = oracle::to_tensor(oracle::random_dense(rng, 4, 3));
  const Tensor2 ahat = gnn::normalized_adjacency(Tensor2::from_rows({{0, 1, 0, 0}, {1, 0, 1, 1}, {0, 1, 0, 0}, {0, 1, 0, 0}}));

  SUBCASE("eval mode returns the mean") {
    nn::Tape t(nn::Mode::kEval);
    Rng r(1);
    auto enc = m.encode(t.constant(x), t.constant(ahat), r);
    CHECK(enc.z.value() == enc.mu.value());
    CHECK(r.counter() == 0);
  }
  SUBCASE("clamped log-variance floor makes Z collapse onto mu") {
    m.w_logvar().value = Tensor2(6, 2, -1e6);
    nn::Tape t;
    Rng r(1);
    auto enc = m.encode(t.constant(Tensor2(4, 3, 1.0)), t.constant(ahat), r);
    for (double v : enc.logvar.value().data()) CHECK(v == VgaeModel::kLogvarMin);
    CHECK(nn::max_abs_diff(enc.z.value(), enc.mu.value()) <= 6.0 * std::exp(-5.0));
  }
  SUBCASE("same stream gives the same sample") {
    nn::Tape t;
    Rng r1(42), r2(42);
    CHECK(m.encode(t.constant(x), t.constant(ahat), r1).z.value() ==
          m.encode(t.constant(x), t.constant(ahat), r2).z.value());
  }
  SUBCASE("Monte Carlo mean of Z matches mu") {
    Rng r(7);
    const std::size_t draws = 10000;
    nn::Tape t0(nn::Mode::kEval);
    Rng unused(0);
    auto ref = m.encode(t0.constant(x), t0.constant(ahat), unused);
    Tensor2 mean(4, 2);
    for (std::size_t k = 0; k < draws; ++k) {
      nn::Tape t;
      mean.mat() += m.encode(t.constant(x), t.constant(ahat), r).z.value().mat();
    }
    mean.mat() /= static_cast<double>(draws);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        const double se = std::exp(0.5 * ref.logvar.value()(i, j)) / std::sqrt(static_cast<double>(draws));
        CHECK(std::abs(mean(i, j) - ref.mu.value()(i, j)) <= 3.0 * se);
      }
    }
  }
}

TEST_CASE("autoencoder gradients pass finite differences") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + rng.uniform_int(7);
    auto a = oracle::random_adjacency(rng, n, 0.5);
    a[0][1] = a[1][0] = 1.0;
    const Tensor2 adj = oracle::to_tensor(a);
    const Tensor2 ahat = gnn::normalized_adjacency(adj);
    const Tensor2 x = oracle::to_tensor(oracle::random_dense(rng, n, 3));

    GaeModel gae(3, 4, 2, rng);
    auto gp = gae.parameters();
    auto r1 = nn::grad_check(
        [&](nn::Tape& t) {
          return reconstruction_ce_logits(inner_product_logits(gae.encode(t.constant(x), t.constant(ahat))), adj);
        },
        gp);
    INFO("gae seed " << seed << " " << r1.worst);
    CHECK(r1.passed);

    VgaeModel vgae(3, 4, 2, rng);
    auto vp = vgae.parameters();
    auto eval = nn::grad_check(
        [&](nn::Tape& t) {
          Rng unused(0);
          auto enc = vgae.encode(t.constant(x), t.constant(ahat), unused);
          return nn::add(reconstruction_ce_logits(inner_product_logits(enc.z), adj), kld(enc.mu, enc.logvar));
        },
        vp, 1e-5, 1e-4, nn::Mode::kEval);
    INFO("vgae eval seed " << seed << " " << eval.worst);
    CHECK(eval.passed);

    Tensor2 eps(n, 2);
    for (double& v : eps.data()) v = rng.normal();
    auto frozen = nn::grad_check(
        [&](nn::Tape& t) {
          auto enc = vgae.encode_with_noise(t.constant(x), t.constant(ahat), eps);
          return nn::add(reconstruction_ce(inner_product_decode(enc.z), adj), kld(enc.mu, enc.logvar));
        },
        vp);
    INFO("vgae frozen-eps seed " << seed << " " << frozen.worst);
    CHECK(frozen.passed);
  }
}

namespace {

std::vector<GraphInput> toy_inputs() {
  GraphInput g{"toy", Tensor2::identity(20), gnn::GraphTensors::from_adjacency(fixture::toy_graph())};
  return {g};
}

}  // namespace

TEST_CASE("train_vgae on the toy graph") {
  const auto graphs = toy_inputs();
  AutoencoderTrainConfig cfg;
  cfg.epochs = 200;
  cfg.seed = 11;
  Rng init(3);
  VgaeModel m(20, 32, 16, init);
  const auto trace = train_vgae(m, graphs, cfg);
  REQUIRE(trace.ce.size() == 201);
  MESSAGE("CE " << trace.ce[0] << " -> " << trace.ce[1] << " -> " << trace.ce.back());
  CHECK(trace.ce.back() <= 0.7 * trace.ce[0]);
  CHECK(trace.ce.back() <= 0.7 * trace.ce[1]);
  for (double k : trace.kld) CHECK(k >= 0.0);

  SUBCASE("same seed reproduces the trace") {
    Rng init2(3);
    VgaeModel m2(20, 32, 16, init2);
    CHECK(train_vgae(m2, graphs, cfg).total == trace.total);
  }
  SUBCASE("zero learning rate freezes the trace") {
    Rng init2(3);
    VgaeModel m2(20, 32, 16, init2);
    cfg.optimizer.learning_rate = 0.0;
    cfg.epochs = 10;
    const auto frozen = train_vgae(m2, graphs, cfg);
    for (double v : frozen.total) CHECK(v == frozen.total[0]);
  }
  SUBCASE("checkpoint round trip preserves the encoder") {
    const auto back = VgaeModel::from_checkpoint(nn::decode_checkpoint(nn::encode_checkpoint(m.to_checkpoint())));
    CHECK(const_cast<VgaeModel&>(back).w_mu().value == m.w_mu().value);
    CHECK(back.embed_dim() == 16);
  }
}

TEST_CASE("train_gae lowers reconstruction loss") {
  const auto graphs = toy_inputs();
  AutoencoderTrainConfig cfg;
  cfg.epochs = 100;
  Rng init(3);
  GaeModel m(20, 32, 16, init);
  const auto trace = train_gae(m, graphs, cfg);
  CHECK(trace.kld.empty());
  CHECK(trace.ce.back() < trace.ce.front());
}

TEST_CASE("train_vgae objective uses the configured KLD weight") {
  const auto graphs = toy_inputs();
  AutoencoderTrainConfig cfg;
  cfg.epochs = 3;
  Rng init(3);
  VgaeModel m(20, 8, 4, init);
  const auto def = train_vgae(m, graphs, cfg);
  CHECK(def.total[0] == doctest::Approx(def.ce[0] + def.kld[0] / 20.0).epsilon(1e-14));
  cfg.kld_weight = 0.0;
  Rng init2(3);
  VgaeModel m2(20, 8, 4, init2);
  const auto none = train_vgae(m2, graphs, cfg);
  CHECK(none.total == none.ce);
}
