#include "doctest.h"

#include "auginf/error.hpp"
#include "auginf/gnn/prediction.hpp"
#include "auginf/numerics/gradcheck.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>

using namespace auginf;
using namespace auginf::gnn;
using nn::Tensor2;
using nn::Var;

namespace {

Tensor2 path3() { return Tensor2::from_rows({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}); }

Tensor2 clique(std::size_t n) {
  Tensor2 a(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 0.0;
  return a;
}

}  // namespace

TEST_CASE("normalized_adjacency spot values") {
  CHECK(normalized_adjacency(Tensor2(1, 1)) == Tensor2(1, 1, 1.0));
  const Tensor2 two = normalized_adjacency(Tensor2::from_rows({{0, 1}, {1, 0}}));
  for (double v : two.data()) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normalized_adjacency(path3())(0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
  CHECK(normalized_adjacency(path3())(0, 1) == doctest::Approx(0.40825).epsilon(1e-5));
  CHECK_THROWS_AS(normalized_adjacency(Tensor2::from_rows({{0, 1}, {0, 0}})), DataError);
}

TEST_CASE("normalized_adjacency matches the dense oracle, is symmetric, spectral radius <= 1") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 1 + rng.uniform_int(9);
    const auto a = oracle::random_adjacency(rng, n, rng.uniform());
    const Tensor2 ahat = normalized_adjacency(oracle::to_tensor(a));
    CHECK(oracle::max_diff(oracle::normalized_adjacency(a), ahat) <= 1e-12);
    CHECK(ahat == Tensor2(nn::Matrix(ahat.mat().transpose())));

    Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    double lambda = 0;
    for (int it = 0; it < 500; ++it) {
      Eigen::VectorXd w = ahat.mat() * v;
      lambda = w.norm() / v.norm();
      v = w / w.norm();
    }
    CHECK(lambda <= 1.0 + 1e-9);
  }
}

TEST_CASE("gcn_forward") {
  Rng rng(1);
  SUBCASE("identity weights on an edgeless graph leave H unchanged") {
    GcnLayer layer("w", 3, 3, Activation::kIdentity, rng);
    layer.weight().value = Tensor2::identity(3);
    nn::Tape t(nn::Mode::kEval);
    const auto h = oracle::random_dense(rng, 4, 3);
    Var out = layer.forward(t.constant(oracle::to_tensor(h)), t.constant(normalized_adjacency(Tensor2(4, 4))));
    CHECK(oracle::max_diff(h, out.value()) == 0.0);
  }
  SUBCASE("zero features give zero output") {
    GcnLayer layer("w", 3, 5, Activation::kElu, rng);
    nn::Tape t(nn::Mode::kEval);
    Var out = layer.forward(t.constant(Tensor2(4, 3)), t.constant(normalized_adjacency(clique(4))));
    CHECK(out.value() == Tensor2(4, 5));
  }
  SUBCASE("random 4-node instances match elu(Ahat H W)") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng r(seed);
      GcnLayer layer("w", 3, 2, Activation::kElu, r);
      const auto a = oracle::random_adjacency(r, 4, 0.5);
      const auto h = oracle::random_dense(r, 4, 3);
      auto expect = oracle::matmul(oracle::matmul(oracle::normalized_adjacency(a), h),
                                   oracle::to_dense(layer.weight().value));
      for (auto& row : expect) for (double& v : row) v = oracle::elu(v);
      nn::Tape t(nn::Mode::kEval);
      Var out = layer.forward(t.constant(oracle::to_tensor(h)), t.constant(normalized_adjacency(oracle::to_tensor(a))));
      CHECK(oracle::max_diff(expect, out.value()) <= 1e-12);
    }
  }
}

TEST_CASE("gat_attention") {
  Rng rng(2);
  SUBCASE("identical features on cliques attend uniformly") {
    for (std::size_t n : {3u, 4u}) {
      GatLayer layer("g", 2, 3, 2, true, Activation::kIdentity, 0.2, rng);
      nn::Tape t(nn::Mode::kEval);
      const auto alphas = layer.attention(t.constant(Tensor2(n, 2, 0.7)), attention_mask(clique(n)));
      for (const Var& a : alphas) {
        for (double v : a.value().data()) CHECK(v == doctest::Approx(1.0 / static_cast<double>(n)));
      }
    }
  }
  SUBCASE("edgeless graph attends to self only") {
    GatLayer layer("g", 2, 3, 3, true, Activation::kIdentity, 0.2, rng);
    nn::Tape t(nn::Mode::kEval);
    for (const Var& a : layer.attention(t.constant(oracle::to_tensor(oracle::random_dense(rng, 5, 2))),
                                        attention_mask(Tensor2(5, 5)))) {
      CHECK(a.value() == Tensor2::identity(5));
    }
  }
  SUBCASE("random instances match the per-row softmax oracle; rows sum to one") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng r(seed);
      GatLayer layer("g", 4, 3, 2, true, Activation::kElu, 0.2, r);
      const auto a = oracle::random_adjacency(r, 5, 0.4);
      const auto h = oracle::random_dense(r, 5, 4);
      nn::Tape t(nn::Mode::kEval);
      const auto alphas = layer.attention(t.constant(oracle::to_tensor(h)), attention_mask(oracle::to_tensor(a)));
      const auto w = oracle::to_dense(layer.weight().value);
      const auto att = oracle::to_dense(layer.attn().value);
      for (std::size_t k = 0; k < 2; ++k) {
        oracle::Dense wk(4, std::vector<double>(3));
        for (std::size_t i = 0; i < 4; ++i) for (std::size_t f = 0; f < 3; ++f) wk[i][f] = w[i][k * 3 + f];
        const std::vector<double> src(att[k].begin(), att[k].begin() + 3), dst(att[k].begin() + 3, att[k].end());
        const auto expect = oracle::gat_attention(oracle::matmul(h, wk), src, dst, a, 0.2);
        CHECK(oracle::max_diff(expect, alphas[k].value()) <= 1e-12);
        for (std::size_t i = 0; i < 5; ++i) {
          double s = 0;
          for (std::size_t j = 0; j < 5; ++j) {
            if (i != j && a[i][j] == 0.0) CHECK(alphas[k].value()(i, j) == 0.0);
            s += alphas[k].value()(i, j);
          }
          CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("gat_forward") {
  Rng rng(3);
  SUBCASE("single head, identity weights, edgeless graph") {
    GatLayer layer("g", 3, 3, 1, true, Activation::kIdentity, 0.2, rng);
    layer.weight().value = Tensor2::identity(3);
    nn::Tape t(nn::Mode::kEval);
    const auto h = oracle::random_dense(rng, 4, 3);
    Var out = layer.forward(t.constant(oracle::to_tensor(h)), attention_mask(Tensor2(4, 4)));
    CHECK(oracle::max_diff(h, out.value()) <= 1e-15);
  }
  SUBCASE("two duplicate heads repeat the single-head output") {
    GatLayer two("g", 3, 2, 2, true, Activation::kElu, 0.2, rng);
    GatLayer one("g", 3, 2, 1, true, Activation::kElu, 0.2, rng);
    one.weight().value.mat() = two.weight().value.mat().leftCols(2);
    two.weight().value.mat().rightCols(2) = one.weight().value.mat();
    one.attn().value.mat() = two.attn().value.mat().topRows(1);
    two.attn().value.mat().bottomRows(1) = one.attn().value.mat();
    const Tensor2 h = oracle::to_tensor(oracle::random_dense(rng, 4, 3));
    const Tensor2 mask = attention_mask(clique(4));
    nn::Tape t(nn::Mode::kEval);
    const Tensor2 o2 = two.forward(t.constant(h), mask).value();
    const Tensor2 o1 = one.forward(t.constant(h), mask).value();
    CHECK(Tensor2(nn::Matrix(o2.mat().leftCols(2))) == o1);
    CHECK(Tensor2(nn::Matrix(o2.mat().rightCols(2))) == o1);
  }
  SUBCASE("random instances match the oracle chain, concat and averaged") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng r(seed);
      for (bool concat : {true, false}) {
        GatLayer layer("g", 4, 3, 2, concat, concat ? Activation::kElu : Activation::kIdentity, 0.2, r);
        const auto a = oracle::random_adjacency(r, 5, 0.5);
        const auto h = oracle::random_dense(r, 5, 4);
        const auto w = oracle::to_dense(layer.weight().value);
        const auto att = oracle::to_dense(layer.attn().value);
        oracle::Dense expect(5, std::vector<double>(concat ? 6 : 3, 0.0));
        for (std::size_t k = 0; k < 2; ++k) {
          oracle::Dense wk(4, std::vector<double>(3));
          for (std::size_t i = 0; i < 4; ++i) for (std::size_t f = 0; f < 3; ++f) wk[i][f] = w[i][k * 3 + f];
          const auto wh = oracle::matmul(h, wk);
          const std::vector<double> src(att[k].begin(), att[k].begin() + 3), dst(att[k].begin() + 3, att[k].end());
          const auto agg = oracle::matmul(oracle::gat_attention(wh, src, dst, a, 0.2), wh);
          for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t f = 0; f < 3; ++f) {
              if (concat) expect[i][k * 3 + f] = oracle::elu(agg[i][f]);
              else expect[i][f] += agg[i][f] / 2.0;
            }
        }
        nn::Tape t(nn::Mode::kEval);
        Var out = layer.forward(t.constant(oracle::to_tensor(h)), attention_mask(oracle::to_tensor(a)));
        CHECK(oracle::max_diff(expect, out.value()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("ego_nll spot values") {
  nn::Tape t;
  auto loss = [&](double a, double b, std::size_t label) {
    return ego_nll(t.constant(Tensor2::from_rows({{9, 9}, {a, b}})), 1, label).value().item();
  };
  CHECK(loss(0, 0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(loss(0, 0, 1) == doctest::Approx(0.69315).epsilon(1e-5));
  CHECK(loss(20, -20, 0) < 1e-15);
  CHECK(loss(1, 3, 1) == doctest::Approx(std::log1p(std::exp(-2.0))).epsilon(1e-14));
  CHECK(loss(1, 3, 1) == doctest::Approx(0.12693).epsilon(1e-4));
  CHECK_THROWS_AS(ego_nll(t.constant(Tensor2(2, 2)), 2, 0), ContractError);
  const auto p = ego_probabilities(Tensor2::from_rows({{0, 0}, {1, 3}}), 1);
  CHECK(p[0] + p[1] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));
}

namespace {

PredictionConfig small_config(HeadKind kind, std::size_t in) {
  PredictionConfig c;
  c.kind = kind;
  c.in_features = in;
  c.hidden = {4, 4};
  c.heads = 2;
  c.output_heads = 2;
  c.dropout = 0.2;
  return c;
}

}  // namespace

TEST_CASE("prediction net gradients pass finite differences") {
  for (HeadKind kind : {HeadKind::kGat, HeadKind::kGcn}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      const std::size_t n = 2 + rng.uniform_int(7);
      PredictionNet net(small_config(kind, 3), rng);
      const GraphTensors g = GraphTensors::from_adjacency(oracle::to_tensor(oracle::random_adjacency(rng, n, 0.5)));
      const Tensor2 x = oracle::to_tensor(oracle::random_dense(rng, n, 3));
      const std::size_t ego = rng.uniform_int(n), label = rng.uniform_int(2);
      auto params = net.parameters();
      const auto report = nn::grad_check(
          [&](nn::Tape& t) {
            Rng drop(seed + 77);
            return ego_nll(net.forward(t.constant(x), g, t.constant(g.ahat), drop), ego, label);
          },
          params);
      INFO(to_string(kind) << " seed " << seed << " " << report.worst << " " << report.max_rel_error);
      CHECK(report.passed);
    }
  }
}

TEST_CASE("ego_nll is invariant to node permutation") {
  for (HeadKind kind : {HeadKind::kGat, HeadKind::kGcn}) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng rng(seed);
      const std::size_t n = 6;
      PredictionNet net(small_config(kind, 3), rng);
      const auto a = oracle::random_adjacency(rng, n, 0.5);
      const auto x = oracle::random_dense(rng, n, 3);
      const std::size_t ego = rng.uniform_int(n);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
      oracle::Dense pa(n, std::vector<double>(n)), px(n);
      for (std::size_t i = 0; i < n; ++i) {
        px[perm[i]] = x[i];
        for (std::size_t j = 0; j < n; ++j) pa[perm[i]][perm[j]] = a[i][j];
      }
      auto eval = [&](const oracle::Dense& adj, const oracle::Dense& feat, std::size_t e) {
        nn::Tape t(nn::Mode::kEval);
        const GraphTensors g = GraphTensors::from_adjacency(oracle::to_tensor(adj));
        Rng drop(0);
        return ego_nll(net.forward(t.constant(oracle::to_tensor(feat)), g, t.constant(g.ahat), drop), e, 1)
            .value()
            .item();
      };
      CHECK(std::abs(eval(a, x, ego) - eval(pa, px, perm[ego])) <= 1e-10);
    }
  }
}

TEST_CASE("prediction net shape and config errors") {
  Rng rng(0);
  PredictionConfig c = small_config(HeadKind::kGat, 5);
  c.hidden = {128, 128};
  c.heads = 8;
  c.output_heads = 8;
  PredictionNet net(c, rng);
  nn::Tape t(nn::Mode::kEval);
  const GraphTensors g = GraphTensors::from_adjacency(clique(4));
  Rng drop(0);
  Var out = net.forward(t.constant(Tensor2(4, 5, 0.1)), g, t.constant(g.ahat), drop);
  CHECK(out.rows() == 4);
  CHECK(out.cols() == 2);
  CHECK_THROWS_AS(net.forward(t.constant(Tensor2(4, 6)), g, t.constant(g.ahat), drop), DimensionError);
  c.heads = 7;
  CHECK_THROWS_AS(PredictionNet(c, rng), ConfigError);
  c.heads = 8;
  c.dropout = 1.0;
  CHECK_THROWS_AS(PredictionNet(c, rng), ConfigError);
}
