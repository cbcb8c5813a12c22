#include "tfn/metrics.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tfn;

TEST_CASE("binary accuracy and positive-class F1 on a worked confusion matrix") {
    //                 TP    FP     TN     FN
    std::vector<bool> pred{true, true, false, false, true, false};
    std::vector<bool> truth{true, false, false, true, true, false};
    // tp=2 fp=1 fn=1 tn=2
    REQUIRE_THAT(binary_accuracy(pred, truth), Catch::Matchers::WithinAbs(4.0 / 6.0, 1e-15));
    REQUIRE_THAT(positive_f1(pred, truth),
                 Catch::Matchers::WithinAbs(2.0 * 2 / (2.0 * 2 + 1 + 1), 1e-15));
}

TEST_CASE("F1 degenerate cases") {
    REQUIRE(positive_f1({false, false}, {false, false}) == 0.0); // no positives anywhere
    REQUIRE(positive_f1({true, true}, {true, true}) == 1.0);
    REQUIRE(positive_f1({false, false}, {true, true}) == 0.0); // zero recall
    REQUIRE(positive_f1({true, true}, {false, false}) == 0.0); // zero precision
}

TEST_CASE("multiclass accuracy and MAE") {
    REQUIRE(multiclass_accuracy({0, 1, 2, 3}, {0, 1, 2, 4}) == 0.75);
    REQUIRE_THAT(mean_absolute_error({1.0, -2.0, 0.5}, {0.0, -2.0, 2.0}),
                 Catch::Matchers::WithinAbs((1.0 + 0.0 + 1.5) / 3.0, 1e-15));
    REQUIRE(mean_absolute_error({1.0, 2.0}, {1.0, 2.0}) == 0.0);
}

TEST_CASE("metric input validation") {
    REQUIRE_THROWS_AS(binary_accuracy({}, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(binary_accuracy({true}, {true, false}), std::invalid_argument);
    REQUIRE_THROWS_AS(multiclass_accuracy({1}, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(mean_absolute_error({1.0}, {1.0, 2.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(pearson_r({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("pearson r on exact linear relationships") {
    std::vector<double> x{-2.0, -1.0, 0.0, 1.0, 2.0};
    std::vector<double> pos, neg;
    for (double xi : x) {
        pos.push_back(3.0 * xi + 7.0);
        neg.push_back(-0.5 * xi + 1.0);
    }
    REQUIRE_THAT(*pearson_r(x, pos), Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(*pearson_r(x, neg), Catch::Matchers::WithinAbs(-1.0, 1e-12));
}

TEST_CASE("pearson r is undefined for constant series") {
    REQUIRE_FALSE(pearson_r({1.0, 1.0, 1.0}, {0.0, 2.0, 5.0}).has_value());
    REQUIRE_FALSE(pearson_r({0.0, 2.0, 5.0}, {4.0, 4.0, 4.0}).has_value());
}

TEST_CASE("pearson r matches a long-double oracle on random data") {
    Rng rng(61);
    std::vector<double> x, y;
    for (int i = 0; i < 500; ++i) {
        x.push_back(rng.uniform(-3.0, 3.0));
        y.push_back(0.4 * x.back() + rng.normal() * 0.8);
    }
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const long double n = 500;
    for (int i = 0; i < 500; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double num = sxy - sx * sy / n;
    const long double den = std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
    REQUIRE_THAT(*pearson_r(x, y),
                 Catch::Matchers::WithinAbs(static_cast<double>(num / den), 1e-12));
}

TEST_CASE("pearson r is invariant under affine maps of either series") {
    Rng rng(62);
    std::vector<double> x, y, xs, ys;
    for (int i = 0; i < 50; ++i) {
        x.push_back(rng.uniform(-1.0, 1.0));
        y.push_back(rng.uniform(-1.0, 1.0));
        xs.push_back(5.0 * x.back() - 2.0);
        ys.push_back(0.1 * y.back() + 9.0);
    }
    REQUIRE_THAT(*pearson_r(xs, ys), Catch::Matchers::WithinAbs(*pearson_r(x, y), 1e-10));
}

namespace {

Prediction reg_pred(double score) {
    Prediction p;
    p.task = Task::Regression;
    p.score = score;
    return p;
}

} // namespace

TEST_CASE("regression metrics row fills every column") {
    std::vector<Prediction> preds{reg_pred(1.2), reg_pred(-0.4), reg_pred(2.9),
                                  reg_pred(-2.0), reg_pred(0.1)};
    std::vector<double> labels{1.0, 0.3, 3.0, -2.4, -0.2};
    auto row = metrics(preds, labels, Task::Regression);
    REQUIRE(row.binary_acc.has_value());
    REQUIRE(row.f1.has_value());
    REQUIRE(row.five_acc.has_value());
    REQUIRE(row.mae.has_value());
    REQUIRE(row.pearson_r.has_value());

    // binary view: pred signs + - + - +, truth + + + - -
    REQUIRE_THAT(*row.binary_acc, Catch::Matchers::WithinAbs(3.0 / 5.0, 1e-15));
    // five-class view: preds map to 1 2 3 1 0 offsets... check directly
    std::vector<int> pc{map_to_five_class(1.2), map_to_five_class(-0.4), map_to_five_class(2.9),
                        map_to_five_class(-2.0), map_to_five_class(0.1)};
    std::vector<int> tc{map_to_five_class(1.0), map_to_five_class(0.3), map_to_five_class(3.0),
                        map_to_five_class(-2.4), map_to_five_class(-0.2)};
    REQUIRE_THAT(*row.five_acc,
                 Catch::Matchers::WithinAbs(multiclass_accuracy(pc, tc), 1e-15));
    REQUIRE_THAT(*row.mae, Catch::Matchers::WithinAbs(
                               mean_absolute_error({1.2, -0.4, 2.9, -2.0, 0.1}, labels), 1e-15));
}

TEST_CASE("binary metrics row leaves regression columns empty") {
    Prediction hi{Task::Binary, 0.9, {}, 0.0};
    Prediction lo{Task::Binary, 0.2, {}, 0.0};
    auto row = metrics({hi, lo, hi}, {1.0, -1.0, -0.5}, Task::Binary);
    REQUIRE(row.binary_acc.has_value());
    REQUIRE(row.f1.has_value());
    REQUIRE_FALSE(row.five_acc.has_value());
    REQUIRE_FALSE(row.mae.has_value());
    REQUIRE_FALSE(row.pearson_r.has_value());
    REQUIRE_THAT(*row.binary_acc, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-15));
}

TEST_CASE("five-class metrics row carries only the 5-class accuracy") {
    Prediction a;
    a.task = Task::FiveClass;
    a.class_probs = Eigen::VectorXd(5);
    a.class_probs << 0.1, 0.1, 0.6, 0.1, 0.1; // class index 2 (label 0)
    Prediction b = a;
    b.class_probs << 0.7, 0.1, 0.1, 0.05, 0.05; // class index 0 (label -2)
    auto row = metrics({a, b}, {0.2, 1.0}, Task::FiveClass);
    REQUIRE_FALSE(row.binary_acc.has_value());
    REQUIRE_FALSE(row.mae.has_value());
    REQUIRE_THAT(*row.five_acc, Catch::Matchers::WithinAbs(0.5, 1e-15));
}

TEST_CASE("constant regression predictions mark r as undefined") {
    auto row = metrics({reg_pred(0.5), reg_pred(0.5), reg_pred(0.5)}, {1.0, -1.0, 0.0},
                       Task::Regression);
    REQUIRE_FALSE(row.pearson_r.has_value());
    REQUIRE(row.r_undefined);
    REQUIRE(row.mae.has_value()); // the rest of the row is still filled
}
