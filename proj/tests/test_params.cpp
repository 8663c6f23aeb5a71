#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "townnet/params.hpp"

using namespace townnet;

namespace {

bool has_error(const std::vector<std::string>& errors, const std::string& needle) {
    return std::any_of(errors.begin(), errors.end(), [&](const auto& e) { return e.find(needle) != std::string::npos; });
}

std::vector<std::string> load_errors(const std::string& doc) {
    try {
        load_params(doc);
    } catch (const ConfigError& e) {
        return e.errors();
    }
    return {};
}

}  // namespace

TEST(Params, DefaultsMatchPublishedTables) {
    const auto p = default_params();
    EXPECT_EQ(p.n_houses, 10000);
    EXPECT_EQ(p.household.alpha, 3.96);
    EXPECT_EQ(p.household.xi, 1.22);
    EXPECT_EQ(p.household.omega, 1.75);
    EXPECT_EQ(p.teachers_per_class, 3);
    EXPECT_EQ(p.gamma(LayerKind::BlueCollar), 0.21);
    EXPECT_EQ(p.gamma(LayerKind::WhiteCollar), 0.27);
    EXPECT_EQ(p.gamma(LayerKind::School), 0.247);
    EXPECT_EQ(p.gamma(LayerKind::Service), 0.15);
    EXPECT_EQ(p.layer(LayerKind::BlueCollar).mu, 7.6);
    EXPECT_EQ(p.layer(LayerKind::WhiteCollar).mu, 7.6);
    EXPECT_EQ(p.layer(LayerKind::School).mu, 19.6);
    EXPECT_EQ(p.layer(LayerKind::Friendship).mu, 12.3);
    EXPECT_EQ(p.layer(LayerKind::Service).mu, 50.0);
    EXPECT_EQ(p.layer(LayerKind::Random).mu, 50.0);
    for (auto k : {LayerKind::BlueCollar, LayerKind::WhiteCollar, LayerKind::School})
        EXPECT_EQ(p.layer(k).sigma, 3.0);
    EXPECT_EQ(p.layer(LayerKind::Friendship).sigma, 5.0);
    EXPECT_EQ(p.layer(LayerKind::Service).sigma, 20.0);
    EXPECT_EQ(p.layer(LayerKind::Random).sigma, 20.0);
    EXPECT_EQ(p.mu0, 0.0);
    EXPECT_EQ(p.sigma0, 1000.0);
    const int expected_exponents[] = {0, 1, 1, 1, 1, 2, 3};
    for (auto k : kAllLayers) EXPECT_EQ(p.beta_exponent(k), expected_exponents[layer_index(k)]) << layer_name(k);
    for (auto k : kAllLayers) EXPECT_EQ(p.displacement_std(k), 1000.0);
}

TEST(Params, DefaultsValidate) { EXPECT_TRUE(validate(default_params()).empty()); }

TEST(Params, RoleRatiosAboveOneRejected) {
    auto p = default_params();
    p.layer(LayerKind::BlueCollar).gamma_ratio = 0.6;
    p.layer(LayerKind::WhiteCollar).gamma_ratio = 0.6;
    EXPECT_TRUE(has_error(validate(p), "role ratios exceed 1"));
}

TEST(Params, ZeroOmegaRejected) {
    auto p = default_params();
    p.household.omega = 0.0;
    EXPECT_TRUE(has_error(validate(p), "omega must be positive"));
}

TEST(Params, ServiceMustNotExceedBlue) {
    auto p = default_params();
    p.layer(LayerKind::Service).gamma_ratio = 0.3;
    EXPECT_TRUE(has_error(validate(p), "layers.service.gamma_ratio"));
}

TEST(Params, ValidateReportsEveryViolation) {
    auto p = default_params();
    p.household.omega = -1.0;
    p.sigma0 = -5.0;
    p.layer(LayerKind::Random).beta_exponent = 7;
    const auto errors = validate(p);
    EXPECT_EQ(errors.size(), 3u);
    EXPECT_TRUE(has_error(errors, "household.omega"));
    EXPECT_TRUE(has_error(errors, "sigma0"));
    EXPECT_TRUE(has_error(errors, "layers.random.beta_exponent"));
}

TEST(Params, EmptyDocumentGivesDefaults) { EXPECT_EQ(load_params("{}"), default_params()); }

TEST(Params, SingleOverride) {
    const auto p = load_params(R"({"layers":{"friendship":{"mu":16.0}}})");
    auto expected = default_params();
    expected.layer(LayerKind::Friendship).mu = 16.0;
    EXPECT_EQ(p, expected);
}

TEST(Params, UnknownKeyRejected) { EXPECT_TRUE(has_error(load_errors(R"({"gamma_ratioo":0.2})"), "unknown key")); }

TEST(Params, NestedUnknownKeyNamesPath) {
    EXPECT_TRUE(has_error(load_errors(R"({"layers":{"school":{"sigmaa":1}}})"), "layers.school.sigmaa"));
    EXPECT_TRUE(has_error(load_errors(R"({"layers":{"canteen":{}}})"), "layers.canteen"));
}

TEST(Params, ParseErrorReportsPosition) {
    const auto errors = load_errors("{\n  \"n_houses\": 5,\n  oops\n}");
    ASSERT_EQ(errors.size(), 1u);
    EXPECT_NE(errors[0].find("line 3"), std::string::npos) << errors[0];
}

TEST(Params, TypeErrorsReported) {
    EXPECT_FALSE(load_errors(R"({"n_houses":"many"})").empty());
    EXPECT_FALSE(load_errors(R"({"n_houses":2.5})").empty());
    EXPECT_FALSE(load_errors(R"({"layers":[]})").empty());
}

TEST(Params, ValidationErrorsPropagate) {
    EXPECT_TRUE(has_error(load_errors(R"({"household":{"omega":0}})"), "omega must be positive"));
}

TEST(Params, StarCountMode) {
    EXPECT_EQ(load_params(R"({"star_count":"outgoing"})").star_count, StarCountMode::Outgoing);
    EXPECT_EQ(load_params(R"({"star_count":"degree"})").star_count, StarCountMode::Degree);
    EXPECT_FALSE(load_errors(R"({"star_count":"both"})").empty());
}

TEST(Params, RoundTrip) {
    EXPECT_EQ(load_params(serialize(default_params())), default_params());

    auto p = default_params();
    p.layer(LayerKind::School).sigma_d = 250.0;
    p.layer(LayerKind::Friendship).mu_d = -3.0;
    p.star_count = StarCountMode::Outgoing;
    p.n_houses = 42;
    EXPECT_EQ(load_params(serialize(p)), p);
}

TEST(Params, FingerprintDependsOnParamsAndSeed) {
    const auto p = default_params();
    auto q = p;
    q.sigma0 = 999.0;
    EXPECT_EQ(params_fingerprint(p, 1), params_fingerprint(p, 1));
    EXPECT_NE(params_fingerprint(p, 1), params_fingerprint(p, 2));
    EXPECT_NE(params_fingerprint(p, 1), params_fingerprint(q, 1));
}
