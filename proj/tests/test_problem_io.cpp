#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mep/problem_io.hpp"
#include "mep/section_model.hpp"
#include "support.hpp"

using namespace mep;

namespace {

std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(MEP_DATA_DIR) / name;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mep_test_" + name);
}

std::string parse_error_message(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ProblemIo, PolynomialRoundTrip) {
  std::mt19937_64 rng(31);
  std::map<Monomial, ComplexMatrix> t;
  for (Monomial m : testkit::monomials(testkit::Shape::full)) t[m] = testkit::random_matrix(3, rng);
  const PolynomialMEP2 p(3, t, {"Y", "chi"}, 0);
  const auto path = temp_file("poly.json");
  save_problem(p, path);
  const Problem back = load_problem(path);
  ASSERT_TRUE(std::holds_alternative<PolynomialMEP2>(back));
  const auto& q = std::get<PolynomialMEP2>(back);
  EXPECT_EQ(q, p);
  EXPECT_EQ(q.param_names(), p.param_names());
  std::filesystem::remove(path);
}

TEST(ProblemIo, LinearRoundTrip) {
  std::mt19937_64 rng(32);
  std::vector<LinearEquation> eqs;
  for (Index n : {2, 3, 1}) {
    LinearEquation e;
    for (int k = 0; k < 4; ++k) e.coefficients.push_back(testkit::random_matrix(n, rng));
    eqs.push_back(e);
  }
  const LinearMEP sys(eqs, {"a", "b", "c"});
  const Problem back = parse_problem(dump_problem(sys));
  ASSERT_TRUE(std::holds_alternative<LinearMEP>(back));
  EXPECT_EQ(std::get<LinearMEP>(back), sys);
  EXPECT_EQ(std::get<LinearMEP>(back).param_names(), sys.param_names());
}

TEST(ProblemIo, MismatchedSizesAreValidationErrors) {
  const std::string text = R"({"kind": "poly2", "size": 2, "terms": [
      {"p": 1, "q": 0, "matrix": {"rows": 1, "cols": 1, "data": [[1, 0]]}}]})";
  EXPECT_THROW(parse_problem(text), ValidationError);
  const std::string linear = R"({"kind": "linear", "n_params": 2, "equations": [
      {"matrices": [{"rows": 1, "cols": 1, "data": [1]}, {"rows": 1, "cols": 1, "data": [1]},
                    {"rows": 2, "cols": 2, "data": [1, 0, 0, 1]}]},
      {"matrices": [{"rows": 1, "cols": 1, "data": [1]}, {"rows": 1, "cols": 1, "data": [1]},
                    {"rows": 1, "cols": 1, "data": [1]}]}]})";
  EXPECT_THROW(parse_problem(linear), ValidationError);
}

TEST(ProblemIo, DuplicateTermIsValidationError) {
  const std::string text = R"({"kind": "poly2", "size": 1, "terms": [
      {"p": 1, "q": 0, "matrix": {"rows": 1, "cols": 1, "data": [1]}},
      {"p": 1, "q": 0, "matrix": {"rows": 1, "cols": 1, "data": [2]}}]})";
  EXPECT_THROW(parse_problem(text), ValidationError);
}

TEST(ProblemIo, ParseErrorsNameTheField) {
  EXPECT_NE(parse_error_message("{not json").find("JSON"), std::string::npos);
  EXPECT_NE(parse_error_message(R"({"size": 1})").find("kind"), std::string::npos);
  EXPECT_NE(parse_error_message(R"({"kind": "poly2", "terms": []})").find("size"),
            std::string::npos);
  const std::string bad_entry = R"({"kind": "poly2", "size": 1, "terms": [
      {"p": 1, "q": 0, "matrix": {"rows": 1, "cols": 1, "data": [["x", 0]]}}]})";
  EXPECT_NE(parse_error_message(bad_entry).find("terms[0].matrix"), std::string::npos);
  const std::string short_data = R"({"kind": "poly2", "size": 2, "terms": [
      {"p": 1, "q": 0, "matrix": {"rows": 2, "cols": 2, "data": [1, 2, 3]}}]})";
  try {
    parse_problem(short_data);
    FAIL() << "short data accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("terms[0].matrix.data"), std::string::npos);
  }
  EXPECT_NE(parse_error_message(R"({"kind": "cubic"})").find("kind"), std::string::npos);
}

TEST(ProblemIo, MissingFileIsParseError) {
  EXPECT_THROW(load_problem("/nonexistent/problem.json"), ParseError);
}

TEST(ProblemIo, ComplexEntriesArePairs) {
  ComplexMatrix m(1, 2);
  m << cplx(1.5, -2), cplx(0, 0.25);
  const auto j = matrix_to_json(m);
  EXPECT_EQ(j["rows"], 1);
  EXPECT_EQ(j["cols"], 2);
  EXPECT_EQ(j["data"][0][0], 1.5);
  EXPECT_EQ(j["data"][0][1], -2.0);
  EXPECT_EQ(j["data"][1][1], 0.25);
  EXPECT_EQ(matrix_from_json(j, "m"), m);
}

TEST(ProblemIo, BundledUndampedFileMatchesHandSubstitution) {
  const Problem loaded = load_problem(data_file("section_undamped.json"));
  ASSERT_TRUE(std::holds_alternative<PolynomialMEP2>(loaded));
  const auto& p = std::get<PolynomialMEP2>(loaded);
  EXPECT_EQ(p.param_names()[0], "tau");
  EXPECT_EQ(p.param_names()[1], "Lambda");
  // bundled section values substituted by hand: mu = 20, r = 0.4899, r_theta = -0.1, a = -0.2
  const double r2 = 0.4899 * 0.4899;
  ComplexMatrix m0g0(2, 2);
  m0g0 << 1.0 + 1.0 / 20, -0.1 - 0.2 / 20, -0.1 - 0.2 / 20, r2 + (1.0 / 8 + 0.04) / 20;
  EXPECT_LT((p.term(0, 0) - m0g0).norm(), 1e-15);
  ComplexMatrix g2(2, 2);
  g2 << 0, 0.1, 0, 0.03;
  EXPECT_LT((p.term(2, 0) - g2).norm(), 1e-15);
  ComplexMatrix k0(2, 2);
  k0 << 0.5642 * 0.5642, 0, 0, r2 * 1.4105 * 1.4105;
  EXPECT_LT((p.term(0, 1) + k0).norm(), 1e-15);
  EXPECT_TRUE(p.has_term(1, 0));
}

TEST(ProblemIo, BundledFilesMatchGeneratedForms) {
  const SectionMatrices m = build_matrices(SectionParams::table1());
  const std::pair<const char*, SectionForm> files[] = {
      {"section_tau_lambda.json", SectionForm::tau_lambda},
      {"section_y_chi.json", SectionForm::y_chi}};
  for (const auto& [name, form] : files) {
    const Problem loaded = load_problem(data_file(name));
    ASSERT_TRUE(std::holds_alternative<PolynomialMEP2>(loaded)) << name;
    EXPECT_EQ(std::get<PolynomialMEP2>(loaded), make_form(m, form)) << name;
  }
  const Problem undamped = load_problem(data_file("section_undamped.json"));
  EXPECT_EQ(std::get<PolynomialMEP2>(undamped),
            make_form(build_matrices(SectionParams::table1_undamped()),
                      SectionForm::tau_lambda_undamped));
}

TEST(ProblemIo, SectionParamsFile) {
  const SectionParams p = load_section_params(data_file("section_table1.json"));
  const SectionParams d = SectionParams::table1();
  EXPECT_EQ(p.mu, d.mu);
  EXPECT_EQ(p.r, d.r);
  EXPECT_EQ(p.zeta_theta, d.zeta_theta);
  EXPECT_EQ(p.a, d.a);
  nlohmann::json j = to_json(d);
  j.erase("omega_h");
  try {
    section_params_from_json(j);
    FAIL() << "missing field accepted";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("omega_h"), std::string::npos);
  }
  j = to_json(d);
  j["mu"] = -1.0;
  EXPECT_THROW(section_params_from_json(j), ValidationError);
}
