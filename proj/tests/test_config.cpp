#include <gtest/gtest.h>

#include <sstream>

#include "uip/error.hpp"
#include "uip/experiments.hpp"

using namespace uip;

namespace {

std::string field_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "<no error>";
}

ExperimentConfig coarse_config() {
    ExperimentConfig c;
    c.solver.nodes = 41;
    c.validate.nodes = 41;
    return c;
}

std::string csv(const CsvTable& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

}  // namespace

TEST(Config, ShippedFileMatchesDefaults) {
    const ExperimentConfig f = load_config(std::string(UIP_SOURCE_DIR) + "/configs/reference.cfg");
    const ExperimentConfig d;
    const MarketParams& a = f.market;
    const MarketParams& b = d.market;
    EXPECT_EQ(a.mu_P, b.mu_P);
    EXPECT_EQ(a.sigma_P, b.sigma_P);
    EXPECT_EQ(a.sigma_bar_P, b.sigma_bar_P);
    EXPECT_EQ(a.gamma, b.gamma);
    EXPECT_EQ(a.lambda_units, b.lambda_units);
    EXPECT_EQ(a.T, b.T);
    ASSERT_EQ(a.dims(), b.dims());
    for (std::size_t i = 0; i < a.dims(); ++i) {
        EXPECT_EQ(a.assets[i].mu, b.assets[i].mu);
        EXPECT_EQ(a.assets[i].sigma, b.assets[i].sigma);
        EXPECT_EQ(a.assets[i].sigma_bar, b.assets[i].sigma_bar);
    }
    EXPECT_EQ(f.spot, d.spot);
    EXPECT_EQ(f.payoff.vulnerable.K, 150.0);
    EXPECT_EQ(f.payoff.vulnerable.L, 1000.0);
    EXPECT_EQ(f.payoff.vulnerable.alpha, 0.05);
    EXPECT_FALSE(f.payoff.epsilon.has_value());
    EXPECT_EQ(f.solver.steps, d.solver.steps);
    EXPECT_EQ(f.solver.nodes, d.solver.nodes);
    EXPECT_EQ(f.solver.tol, d.solver.tol);
    EXPECT_EQ(f.experiment.n_list, d.experiment.n_list);
    EXPECT_EQ(f.experiment.vol_pairs, d.experiment.vol_pairs);
    EXPECT_EQ(f.experiment.s1.points(), d.experiment.s1.points());
    EXPECT_EQ(f.validate.limit_gammas, d.validate.limit_gammas);
    EXPECT_FALSE(f.validate.properties.has_value());
    EXPECT_EQ(f.seed, d.seed);
    EXPECT_EQ(csv(run_price(f)), csv(run_price(d)));
}

TEST(Config, ParsesCommentsAndOverrides) {
    std::istringstream in("# header\n\nmarket.gamma = 2  # trailing\nasset.3.mu = 0.05\nasset.3.sigma = 0.2\n"
                          "spot = 1, 2, 3\npayoff.kind = put\nsolver.scheme = picard\nmarket.gamma = 3\n");
    const ExperimentConfig c = parse_config(in);
    EXPECT_EQ(c.market.gamma, 3.0);
    ASSERT_EQ(c.market.dims(), 3u);
    EXPECT_EQ(c.market.assets[2].mu, 0.05);
    EXPECT_EQ(c.market.assets[2].sigma, 0.2);
    EXPECT_EQ(c.spot, (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(c.payoff.kind, PayoffKind::Put);
    EXPECT_EQ(c.solver.scheme, Scheme::Picard);
}

TEST(Config, ErrorsNameTheKey) {
    ExperimentConfig c;
    EXPECT_EQ(field_of([&] { set_config_value(c, "market.bogus", "1"); }), "market.bogus");
    EXPECT_EQ(field_of([&] { set_config_value(c, "market.gamma", "abc"); }), "market.gamma");
    EXPECT_EQ(field_of([&] { set_config_value(c, "market.gamma", "1.5x"); }), "market.gamma");
    EXPECT_EQ(field_of([&] { set_config_value(c, "market.gamma", "nan"); }), "market.gamma");
    EXPECT_EQ(field_of([&] { set_config_value(c, "solver.N", "0"); }), "solver.N");
    EXPECT_EQ(field_of([&] { set_config_value(c, "solver.N", "-3"); }), "solver.N");
    EXPECT_EQ(field_of([&] { set_config_value(c, "solver.scheme", "euler"); }), "solver.scheme");
    EXPECT_EQ(field_of([&] { set_config_value(c, "asset.4.mu", "0.1"); }), "asset.4.mu");
    EXPECT_EQ(field_of([&] { set_config_value(c, "asset.1.rho", "0.1"); }), "asset.1.rho");
    EXPECT_EQ(field_of([&] { set_config_value(c, "experiment.gammas", ""); }), "experiment.gammas");
    EXPECT_EQ(field_of([&] { set_config_value(c, "validate.inject_fault", "all"); }), "validate.inject_fault");
    std::istringstream in("market.gamma = 1\nno equals sign\n");
    EXPECT_EQ(field_of([&] { parse_config(in); }), "line 2");
    EXPECT_EQ(field_of([] { load_config("/nonexistent/x.cfg"); }), "config");
}

TEST(Config, CrossFieldValidation) {
    auto fails_on = [](const std::string& key, const std::string& value) {
        ExperimentConfig c;
        set_config_value(c, key, value);
        return field_of([&] { validate(c); });
    };
    EXPECT_EQ(fails_on("spot", "50"), "spot");
    EXPECT_EQ(fails_on("spot", "50, -1"), "spot");
    EXPECT_EQ(fails_on("asset.2.sigma", "-0.1"), "asset.2.sigma");
    EXPECT_EQ(fails_on("experiment.vol_pairs", "0.1, 0.2, 0.3"), "experiment.vol_pairs");
    EXPECT_EQ(fails_on("experiment.s1.min", "300"), "experiment.s1");
    EXPECT_EQ(fails_on("experiment.n_list", "1, 2.5"), "experiment.n_list");
    EXPECT_EQ(fails_on("payoff.alpha", "2"), "payoff.alpha");
    EXPECT_EQ(fails_on("market.assets", "1"), "spot");
    EXPECT_NO_THROW(validate(ExperimentConfig{}));
}

TEST(Config, SmallSettingsAndLists) {
    ExperimentConfig c;
    set_config_value(c, "validate.properties", "");
    ASSERT_TRUE(c.validate.properties.has_value());
    EXPECT_TRUE(c.validate.properties->empty());
    set_config_value(c, "validate.properties", "driver_consistency, generator_order");
    EXPECT_EQ(*c.validate.properties, (std::vector<std::string>{"driver_consistency", "generator_order"}));
    set_config_value(c, "payoff.epsilon", "2.5");
    EXPECT_EQ(c.payoff.epsilon, 2.5);
    set_config_value(c, "payoff.epsilon", "default");
    EXPECT_FALSE(c.payoff.epsilon.has_value());
    EXPECT_EQ((Range{1.0, 3.0, 3}.points()), (std::vector<double>{1.0, 2.0, 3.0}));
    EXPECT_EQ((Range{4.0, 9.0, 1}.points()), (std::vector<double>{4.0}));
}

TEST(Experiments, ConstantPayoffPricesToTheConstantForEveryScheme) {
    ExperimentConfig c = coarse_config();
    c.payoff.kind = PayoffKind::Constant;
    c.payoff.value = 10.0;
    c.solver.mc_paths = 1000;
    for (Scheme s : {Scheme::Splitting, Scheme::Picard, Scheme::AnalyticNoHedge, Scheme::AnalyticComplete,
                     Scheme::McNoHedge, Scheme::McComplete}) {
        c.solver.scheme = s;
        const CsvTable t = run_price(c);
        ASSERT_EQ(t.rows.size(), 1u);
        EXPECT_EQ(t.rows[0][0], to_string(s));
        EXPECT_NEAR(std::stod(t.rows[0][6]), 10.0, 1e-9) << to_string(s);
    }
}

TEST(Experiments, PriceRowSchemaAndDeterminism) {
    const ExperimentConfig c = coarse_config();
    const CsvTable t = run_price(c);
    EXPECT_EQ(t.header, (std::vector<std::string>{"scheme", "s1", "s2", "gamma", "lambda", "N", "price", "hedge",
                                                  "wall_ms"}));
    const double p = std::stod(t.rows[0][6]);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 150.0);
    EXPECT_EQ(std::stod(t.rows[0][8]), 0.0);
    EXPECT_EQ(csv(t), csv(run_price(c)));
    std::ostringstream diag;
    RunOptions opts;
    opts.diag = &diag;
    run_price(c, opts);
    EXPECT_NE(diag.str().find("residual_sup="), std::string::npos);
}

TEST(Experiments, NoHedgeMatchesSplittingWithoutIndexLoading) {
    ExperimentConfig c;
    c.market.sigma_bar_P = 0.0;
    c.spot = {50.0, 1400.0};
    const double split = std::stod(run_price(c).rows[0][6]);
    c.solver.scheme = Scheme::AnalyticNoHedge;
    const double bench = std::stod(run_price(c).rows[0][6]);
    EXPECT_NEAR(split, bench, 0.02 * bench);
}

TEST(Experiments, UnknownFigure) {
    EXPECT_EQ(field_of([] { run_figure(ExperimentConfig{}, "fig-x"); }), "figure");
    EXPECT_EQ(figure_names().size(), 5u);
}

TEST(Experiments, FigureSTableShape) {
    ExperimentConfig c = coarse_config();
    c.solver.nodes = 61;
    c.experiment.s1 = Range{10.0, 450.0, 5};
    c.experiment.s2_panels = {500.0};
    const CsvTable t = run_figure(c, "fig-s");
    ASSERT_EQ(t.rows.size(), 5u);
    for (const auto& r : t.rows) {
        EXPECT_GE(std::stod(r[3]), std::stod(r[4]));
        EXPECT_GE(std::stod(r[4]), 0.0);
    }
    EXPECT_LT(std::stod(t.rows.back()[3]), 0.05);
}

TEST(Experiments, ValidationSelectionAndFault) {
    ExperimentConfig c = coarse_config();
    c.validate.properties = std::vector<std::string>{};
    const ValidationOutcome none = run_validation(c);
    EXPECT_TRUE(none.passed);
    EXPECT_TRUE(none.reports.empty());
    EXPECT_EQ(none.table().rows.size(), 0u);

    c.validate.properties = std::vector<std::string>{"driver_consistency"};
    EXPECT_TRUE(run_validation(c).passed);
    c.validate.inject_fault = "driver_sign";
    const ValidationOutcome bad = run_validation(c);
    EXPECT_FALSE(bad.passed);
    EXPECT_EQ(bad.table().rows[0][4], "false");

    c.validate.properties = std::vector<std::string>{"nope"};
    EXPECT_EQ(field_of([&] { run_validation(c); }), "validate.properties");
}

TEST(Experiments, ConvergeTable) {
    ExperimentConfig c = coarse_config();
    c.experiment.n_list = {1, 2};
    const CsvTable t = run_converge(c);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][0], "1");
    EXPECT_EQ(t.rows[0][2], t.rows[1][1]);  // price(2) computed twice, identically
}
