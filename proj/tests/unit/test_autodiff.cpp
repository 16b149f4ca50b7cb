#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "tgnn/autodiff/ops.hpp"
#include "tgnn/errors.hpp"

namespace tgnn {
namespace {

using testing::check_gradients;
using testing::random_matrix;

constexpr double kGradTol = 1e-6;

TEST(Matrix, ConstructionAndAccess) {
  const Matrix m = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(m.shape(), (Shape{2, 3}));
  EXPECT_EQ(m(1, 2), 6.0);
  EXPECT_EQ(Matrix::identity(3)(2, 2), 1.0);
  EXPECT_EQ(Matrix::identity(3)(0, 2), 0.0);
  EXPECT_THROW(Matrix(2, 2, std::vector<double>{1.0}), ShapeError);
  EXPECT_EQ(to_string(Shape{3, 4}), "[3x4]");
}

TEST(Tensor, RejectsEmptyAndNonFiniteValues) {
  EXPECT_THROW(Tensor(Matrix(0, 3)), ShapeError);
  Matrix bad(1, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Tensor{bad}, NumericError);
  EXPECT_THROW(Tensor(Matrix(2, 1)).item(), ShapeError);
}

TEST(Ops, ForwardValuesOnSmallExample) {
  const Tensor a(Matrix::from_rows({{1, 2}, {3, 4}}));
  const Tensor b(Matrix::from_rows({{5, 6}, {7, 8}}));
  EXPECT_EQ(matmul(a, b).value(), Matrix::from_rows({{19, 22}, {43, 50}}));
  EXPECT_EQ(add(a, b).value(), Matrix::from_rows({{6, 8}, {10, 12}}));
  EXPECT_EQ(sub(a, b).value(), Matrix::from_rows({{-4, -4}, {-4, -4}}));
  EXPECT_EQ(hadamard(a, b).value(), Matrix::from_rows({{5, 12}, {21, 32}}));
  EXPECT_EQ(one_minus(a).value(), Matrix::from_rows({{0, -1}, {-2, -3}}));
  EXPECT_EQ(add_bias(a, Tensor(Matrix::from_rows({{10, 20}}))).value(),
            Matrix::from_rows({{11, 22}, {13, 24}}));
  EXPECT_EQ(concat_cols(a, b).value(), Matrix::from_rows({{1, 2, 5, 6}, {3, 4, 7, 8}}));
  EXPECT_EQ(sum(a).item(), 10.0);
  EXPECT_DOUBLE_EQ(mse_loss(a, b).item(), 16.0);
  EXPECT_NEAR(sigmoid(Tensor(Matrix(1, 1, 0.0))).item(), 0.5, 1e-15);
  EXPECT_EQ(relu(Tensor(Matrix::from_rows({{-1, 0, 2}}))).value(), Matrix::from_rows({{0, 0, 2}}));
}

TEST(Ops, ShapeMismatchesAreRejected) {
  const Tensor a(Matrix(2, 3, 1.0));
  const Tensor b(Matrix(2, 2, 1.0));
  EXPECT_THROW(matmul(a, b), ShapeError);
  EXPECT_THROW(add(a, b), ShapeError);
  EXPECT_THROW(hadamard(a, b), ShapeError);
  EXPECT_THROW(add_bias(a, Tensor(Matrix(1, 2))), ShapeError);
  EXPECT_THROW(concat_cols(a, Tensor(Matrix(3, 1))), ShapeError);
  EXPECT_THROW(mse_loss(a, b), ShapeError);
}

TEST(Ops, SigmoidIsStableForLargeInputs) {
  const Tensor x(Matrix::from_rows({{-800.0, 800.0}}));
  const Matrix y = sigmoid(x).value();
  EXPECT_EQ(y(0, 0), 0.0);
  EXPECT_EQ(y(0, 1), 1.0);
}

// Contract an op's output with fixed random weights so every output entry
// contributes a distinct gradient.
Tensor contract(const Tensor& y, std::uint64_t seed = 99) {
  Rng rng(seed);
  return sum(hadamard(y, Tensor(random_matrix(y.rows(), y.cols(), rng))));
}

struct OpCase {
  const char* name;
  std::vector<Shape> shapes;
  Tensor (*fn)(const std::vector<Tensor>&);
};

class OpGradient : public ::testing::TestWithParam<OpCase> {};

TEST_P(OpGradient, MatchesCentralDifferences) {
  const OpCase& c = GetParam();
  Rng rng(7);
  std::vector<std::pair<std::string, Matrix>> inputs;
  for (std::size_t i = 0; i < c.shapes.size(); ++i) {
    inputs.emplace_back("in" + std::to_string(i),
                        random_matrix(c.shapes[i].rows, c.shapes[i].cols, rng));
  }
  const auto result = check_gradients({}, inputs, [&](Tape&, const std::vector<Tensor>& v) {
    return contract(c.fn(v));
  });
  EXPECT_EQ(result.tensors, c.shapes.size());
  EXPECT_LT(result.worst, kGradTol) << c.name << " worst at " << result.worst_name;
}

INSTANTIATE_TEST_SUITE_P(
    AllOps, OpGradient,
    ::testing::Values(
        OpCase{"matmul", {{3, 4}, {4, 2}}, [](const auto& v) { return matmul(v[0], v[1]); }},
        OpCase{"matmul_shared", {{3, 3}}, [](const auto& v) { return matmul(v[0], v[0]); }},
        OpCase{"add", {{3, 2}, {3, 2}}, [](const auto& v) { return add(v[0], v[1]); }},
        OpCase{"sub", {{3, 2}, {3, 2}}, [](const auto& v) { return sub(v[0], v[1]); }},
        OpCase{"hadamard", {{3, 2}, {3, 2}}, [](const auto& v) { return hadamard(v[0], v[1]); }},
        OpCase{"scale", {{2, 5}}, [](const auto& v) { return scale(v[0], -2.5); }},
        OpCase{"add_scalar", {{2, 5}}, [](const auto& v) { return add_scalar(v[0], 0.75); }},
        OpCase{"one_minus", {{2, 5}}, [](const auto& v) { return one_minus(v[0]); }},
        OpCase{"add_bias", {{4, 3}, {1, 3}}, [](const auto& v) { return add_bias(v[0], v[1]); }},
        OpCase{"mul_row", {{4, 3}, {1, 3}}, [](const auto& v) { return mul_row(v[0], v[1]); }},
        OpCase{"relu", {{4, 4}}, [](const auto& v) { return relu(v[0]); }},
        OpCase{"sigmoid", {{4, 4}}, [](const auto& v) { return sigmoid(v[0]); }},
        OpCase{"tanh", {{4, 4}}, [](const auto& v) { return tanh(v[0]); }},
        OpCase{"concat_cols", {{3, 2}, {3, 4}}, [](const auto& v) { return concat_cols(v[0], v[1]); }},
        OpCase{"mse_loss", {{5, 1}, {5, 1}}, [](const auto& v) { return mse_loss(v[0], v[1]); }},
        OpCase{"masked_mse_loss", {{5, 2}, {5, 2}},
               [](const auto& v) {
                 return masked_mse_loss(v[0], v[1], {true, false, true, true, false});
               }},
        OpCase{"dropout",
               {{6, 3}},
               [](const auto& v) {
                 Rng r(5);
                 return dropout(v[0], 0.4, true, r);
               }},
        OpCase{"composite_gru_like", {{4, 3}, {3, 3}, {4, 3}},
               [](const auto& v) {
                 const Tensor z = sigmoid(matmul(v[0], v[1]));
                 return add(hadamard(z, v[2]), hadamard(one_minus(z), tanh(v[2])));
               }}),
    [](const auto& info) { return std::string(info.param.name); });

TEST(Tape, ParameterGradientsAccumulateUntilZeroed) {
  Parameter w("w", Matrix::from_rows({{2.0, -1.0}}));
  auto run = [&] {
    Tape tape;
    const Tensor x(Matrix::from_rows({{1.0, 3.0}}));
    tape.backward(sum(hadamard(tape.watch(w), x)));
  };
  run();
  EXPECT_TRUE(w.has_grad);
  EXPECT_EQ(w.grad, Matrix::from_rows({{1.0, 3.0}}));
  run();
  EXPECT_EQ(w.grad, Matrix::from_rows({{2.0, 6.0}}));
  w.zero_grad();
  EXPECT_FALSE(w.has_grad);
  EXPECT_EQ(w.grad, Matrix(1, 2));
}

TEST(Tape, WatchingTwiceReturnsOneNode) {
  Parameter w("w", Matrix(2, 2, 1.0));
  Tape tape;
  const Tensor a = tape.watch(w);
  const Tensor b = tape.watch(w);
  EXPECT_EQ(a.node(), b.node());
  tape.backward(sum(add(a, b)));
  EXPECT_EQ(w.grad, Matrix(2, 2, 2.0));
}

TEST(Tape, ParameterCheckCoversWatchedLeaves) {
  Rng rng(3);
  Parameter w("w", random_matrix(3, 2, rng));
  Parameter b("b", random_matrix(1, 2, rng));
  const auto result = check_gradients(
      {&w, &b}, {{"x", random_matrix(4, 3, rng)}}, [&](Tape& tape, const std::vector<Tensor>& v) {
        return contract(tanh(add_bias(matmul(v[0], tape.watch(w)), tape.watch(b))));
      });
  EXPECT_EQ(result.tensors, 3u);
  EXPECT_LT(result.worst, kGradTol) << result.worst_name;
}

TEST(Tape, InferenceModeRecordsNothing) {
  Parameter w("w", Matrix(2, 2, 1.0));
  Tape tape(Tape::Mode::inference);
  const Tensor x = tape.watch(w);
  EXPECT_FALSE(x.tracked());
  const Tensor y = sum(matmul(x, tape.variable(Matrix(2, 1, 1.0))));
  EXPECT_FALSE(y.tracked());
  EXPECT_EQ(y.item(), 4.0);
  EXPECT_EQ(tape.size(), 0u);
  EXPECT_THROW(tape.backward(y), Error);
}

TEST(Tape, ConstantsOnlyProduceConstants) {
  Tape tape;
  const Tensor y = add(Tensor(Matrix(1, 1, 1.0)), Tensor(Matrix(1, 1, 2.0)));
  EXPECT_FALSE(y.tracked());
  EXPECT_EQ(tape.size(), 0u);
}

TEST(Tape, BackwardRequiresScalarRootOnSameTape) {
  Tape tape, other;
  const Tensor v = tape.variable(Matrix(2, 1, 1.0));
  EXPECT_THROW(tape.backward(v), ShapeError);
  EXPECT_THROW(other.backward(sum(v)), Error);
  const Tensor u = other.variable(Matrix(2, 1, 1.0));
  EXPECT_THROW(add(u, v), Error);
}

TEST(Tape, NonFiniteResultRaisesNumericError) {
  Tape tape;
  const Tensor big = tape.variable(Matrix(1, 1, 1e300));
  EXPECT_THROW(hadamard(big, big), NumericError);
  EXPECT_THROW(scale(big, 1e10), NumericError);
}

TEST(Tape, UnusedLeafHasNoGradient) {
  Tape tape;
  const Tensor a = tape.variable(Matrix(1, 1, 2.0));
  const Tensor b = tape.variable(Matrix(1, 1, 3.0));
  const Gradients g = tape.backward(scale(a, 4.0));
  EXPECT_EQ(g.at(a)(0, 0), 4.0);
  EXPECT_EQ(g.find(b), nullptr);
  EXPECT_THROW(g.at(b), Error);
}

TEST(Tape, DetachStopsGradientFlow) {
  Tape tape;
  const Tensor a = tape.variable(Matrix(1, 1, 2.0));
  const Tensor d = detach(hadamard(a, a));
  EXPECT_FALSE(d.tracked());
  EXPECT_EQ(d.item(), 4.0);
  const Gradients g = tape.backward(add(hadamard(d, a), a));
  EXPECT_EQ(g.at(a)(0, 0), 5.0);
}

TEST(Dropout, IdentityOutsideTrainingAndAtRateZero) {
  Rng rng(1);
  const Tensor x(random_matrix(10, 10, rng));
  EXPECT_EQ(dropout(x, 0.5, false, rng).value(), x.value());
  EXPECT_EQ(dropout(x, 0.0, true, rng).value(), x.value());
  EXPECT_THROW(dropout(x, 1.0, true, rng), ConfigError);
  EXPECT_THROW(dropout(x, -0.1, true, rng), ConfigError);
}

TEST(Dropout, SurvivorsAreRescaledAndRateIsRespected) {
  Rng rng(11);
  const Tensor x(Matrix(200, 50, 1.0));
  const Matrix y = dropout(x, 0.3, true, rng).value();
  std::size_t zeros = 0;
  for (double v : y.values()) {
    if (v == 0.0) {
      ++zeros;
    } else {
      EXPECT_DOUBLE_EQ(v, 1.0 / 0.7);
    }
  }
  EXPECT_NEAR(static_cast<double>(zeros) / static_cast<double>(y.size()), 0.3, 0.02);
}

TEST(MaskedMse, AveragesOnlySelectedRows) {
  const Tensor p(Matrix::from_rows({{1.0}, {5.0}, {3.0}}));
  const Tensor t(Matrix::from_rows({{0.0}, {0.0}, {0.0}}));
  EXPECT_DOUBLE_EQ(masked_mse_loss(p, t, {true, false, true}).item(), 5.0);
  EXPECT_DOUBLE_EQ(masked_mse_loss(p, t, {true, true, true}).item(), mse_loss(p, t).item());
  EXPECT_THROW(masked_mse_loss(p, t, {false, false, false}), DataError);
  EXPECT_THROW(masked_mse_loss(p, t, {true}), ShapeError);
}

}  // namespace
}  // namespace tgnn
