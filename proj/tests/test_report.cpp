#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nsbound/report.hpp"

using namespace nsbound;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fixture(const std::string& name) { return std::string(NSBOUND_FIXTURES) + "/" + name; }

std::string error_of(const std::string& name) {
  try {
    load_ensemble_file(fixture(name));
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

Ensemble rotated(const Ensemble& e, const ComplexMatrix& u, const std::vector<std::size_t>& order) {
  std::vector<DensityOperator> states;
  for (std::size_t k : order) states.emplace_back(conjugate(u, e.state(k)));
  return Ensemble::uniform(states);
}

}  // namespace

TEST_CASE("ensemble files parse and round trip") {
  const Ensemble trine = load_ensemble_file(fixture("trine_mixed.json"));
  CHECK(trine.size() == 3);
  CHECK(trine.dim() == 2);
  const Ensemble again = ensemble_from_json(ensemble_to_json(trine));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(again.prior(k) == trine.prior(k));
    CHECK(frobenius_distance(again.state(k), trine.state(k)) == 0.0);
  }
  const Ensemble q = load_ensemble_file(fixture("random_qutrit_triple.json"));
  CHECK(q.prior(2) == 0.5);
}

TEST_CASE("ensemble file diagnostics name the invariant and the state") {
  CHECK(error_of("not_json.json").find("invalid JSON") != std::string::npos);
  const auto trace = error_of("bad_trace.json");
  CHECK(trace.find("state 1") != std::string::npos);
  CHECK(trace.find("trace") != std::string::npos);
  const auto ragged = error_of("ragged.json");
  CHECK(ragged.find("state 0") != std::string::npos);
  CHECK(ragged.find("row 1") != std::string::npos);
  CHECK(error_of("bad_priors.json").find("priors sum") != std::string::npos);
  const auto psd = error_of("not_psd.json");
  CHECK(psd.find("state 1") != std::string::npos);
  CHECK(psd.find("negative eigenvalue") != std::string::npos);
  CHECK(error_of("missing.json").find("cannot open") != std::string::npos);

  CHECK_THROWS_AS(ensemble_from_json(Json::parse(R"({"dim": 2})")), InputError);
  CHECK_THROWS_AS(ensemble_from_json(Json::parse(R"({"dim": 0, "states": []})")), InputError);
  CHECK_THROWS_AS(ensemble_from_json(Json::parse(
                      R"({"dim": 1, "states": [{"prior": 1, "matrix": [[[1, 0]]]}]})")),
                  InputError);
  CHECK_THROWS_AS(ensemble_from_json(Json::parse(
                      R"({"dim": 1, "states": [{"prior": 0.5, "matrix": [[["a", 0]]]},
                                               {"prior": 0.5, "matrix": [[[1, 0]]]}]})")),
                  InputError);
}

TEST_CASE("detect_symmetric_qubit recovers family parameters") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n = 2; n <= 6; ++n)
    for (double theta : {0.4, 1.5707963267948966, 2.6})
      for (double r : {1.0 / 3.0, 1.0}) {
        const Ensemble fam = symmetric_qubit_family(n, theta, r);
        ComplexMatrix h(2);
        h(0, 0) = g(rng);
        h(1, 1) = g(rng);
        h(0, 1) = Complex(g(rng), g(rng));
        h(1, 0) = std::conj(h(0, 1));
        std::vector<std::size_t> order;
        for (int k = n - 1; k >= 0; --k) order.push_back(k);
        const auto sym = detect_symmetric_qubit(rotated(fam, unitary_from_generator(1.0, h), order));
        REQUIRE(sym.has_value());
        CHECK(sym->n == n);
        CHECK(std::abs(sym->r - r) <= 1e-10);
        CHECK(std::abs(std::sin(sym->theta) - std::sin(theta)) <= 1e-9);
      }

  CHECK(detect_symmetric_qubit(load_ensemble_file(fixture("trine_mixed.json"))).has_value());
  CHECK_FALSE(detect_symmetric_qubit(load_ensemble_file(fixture("asymmetric_qubits.json"))));
  CHECK_FALSE(detect_symmetric_qubit(load_ensemble_file(fixture("random_qutrit_triple.json"))));
  const auto dup = detect_symmetric_qubit(load_ensemble_file(fixture("duplicate_pure.json")));
  REQUIRE(dup.has_value());
  CHECK(dup->theta == 0.0);

  // Four points at the square's corners minus one: not a regular polygon.
  const auto a = density_from_bloch({1, 0, 0}), b = density_from_bloch({0, 1, 0});
  const auto c = density_from_bloch({-1, 0, 0}), d = density_from_bloch({0, -1, 0});
  CHECK(detect_symmetric_qubit(Ensemble::uniform({a, b, c, d})).has_value());
  CHECK_FALSE(detect_symmetric_qubit(Ensemble::uniform({a, b, c, b})).has_value());
  CHECK_FALSE(detect_symmetric_qubit(Ensemble({{0.3, a}, {0.7, c}})).has_value());
}

TEST_CASE("report JSON round trips byte for byte") {
  RunOptions opts;
  const Ensemble trine = symmetric_qubit_family(3, kPi / 2, 1.0 / 3.0);
  const auto rec = analyze("trine", trine,
                           NsEntry{4.0 / 9.0, 5.0 / 9.0, "symmetric-qubit"}, std::nullopt, opts);
  const std::string first = record_to_json(rec).dump(2);
  const std::string second = record_to_json(record_from_json(Json::parse(first))).dump(2);
  CHECK(first == second);

  const Json j = Json::parse(first);
  for (const char* key : {"id", "n_states", "dim", "ns_bound", "l4", "oracle", "closed_form", "orderings"})
    CHECK(j.contains(key));
  CHECK(j["closed_form"].is_null());
  CHECK(j["ns_bound"]["success_upper"].get<double>() == 0.444444444444);

  const auto doc = document_json("compare", {rec}, {});
  const std::string d1 = doc.dump(2);
  std::vector<ReportRecord> back;
  const Json parsed = Json::parse(d1);
  for (const auto& r : parsed["reports"]) back.push_back(record_from_json(r));
  CHECK(document_json("compare", back, {}).dump(2) == d1);

  CHECK_THROWS_AS(record_from_json(Json::parse(R"({"id": "x"})")), InputError);
}

TEST_CASE("orderings follow the record's numbers") {
  ReportRecord r;
  r.oracle.success = 0.5;
  r.l4 = {0.6, 0.4};
  CHECK_FALSE(compute_orderings(r).oracle_le_one_minus_l4);
  CHECK_FALSE(compute_orderings(r).oracle_le_ns_bound.has_value());
  r.l4 = {0.5 - 5e-7, 0.5 - 5e-7};
  CHECK(compute_orderings(r).oracle_le_one_minus_l4);
  r.ns_bound = NsEntry{0.4, 0.6, "x"};
  CHECK_FALSE(compute_orderings(r).ok());
}

TEST_CASE("reproduction passes every check") {
  const Reproduction rep = run_reproduction(RunOptions{});
  for (const auto& c : rep.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  CHECK(rep.ok());
  // trine + 5 * 25 * 3 qubit rows + 4 spin rows
  CHECK(rep.records.size() == 1 + 375 + 4);
  CHECK(qubit_sweep_thetas().size() == 25);
  CHECK(qubit_sweep_thetas().front() > 0.05);
  CHECK(qubit_sweep_thetas().back() < kPi - 0.05);
}

TEST_CASE("compare command on fixtures") {
  RunOptions opts;
  opts.format = "json";
  std::ostringstream out, err;
  CHECK(cmd_compare(fixture("trine_mixed.json"), opts, out, err) == kExitOk);
  const Json doc = Json::parse(out.str());
  const Json& rec = doc["reports"][0];
  CHECK(std::abs(rec["oracle"]["success"].get<double>() - 4.0 / 9.0) <= 1e-6);
  CHECK(std::abs(rec["ns_bound"]["error_lower"].get<double>() - 5.0 / 9.0) <= 1e-11);
  CHECK(rec["orderings"]["ok"].get<bool>());
  CHECK(rec["closed_form"]["value"].get<double>() == doctest::Approx(4.0 / 9.0));

  std::ostringstream out2, err2;
  CHECK(cmd_compare(fixture("orthogonal_pair.json"), opts, out2, err2) == kExitOk);
  const Json pair = Json::parse(out2.str())["reports"][0];
  CHECK(pair["closed_form"]["formula"] == "helstrom");
  CHECK(pair["closed_form"]["value"].get<double>() == doctest::Approx(1.0));
  CHECK(pair["oracle"]["success"].get<double>() == doctest::Approx(1.0));

  std::ostringstream out3, err3;
  CHECK(cmd_compare(fixture("random_qutrit_triple.json"), opts, out3, err3) == kExitOk);
  const Json q = Json::parse(out3.str())["reports"][0];
  CHECK(q["ns_bound"].is_null());
  CHECK(q["oracle"]["success"].get<double>() <= q["l4"]["success_complement"].get<double>() + 1e-6);

  std::ostringstream out4, err4;
  CHECK(cmd_compare(fixture("bad_trace.json"), opts, out4, err4) == kExitInputError);
  CHECK(err4.str().find("state 1") != std::string::npos);

  opts.format = "csv";
  std::ostringstream csv, err5;
  CHECK(cmd_compare(fixture("trine_mixed.json"), opts, csv, err5) == kExitOk);
  CHECK(csv.str().rfind(
            "ensemble_id,n_states,dim,ns_success_upper,l4_error,one_minus_l4,oracle_success,"
            "certificate_gap,orderings_ok\n",
            0) == 0);
  CHECK(csv.str().find("trine_mixed,3,2,") != std::string::npos);
}

TEST_CASE("bound command") {
  RunOptions opts;
  opts.format = "json";
  auto run = [&](const BoundRequest& req, int expected) {
    std::ostringstream out, err;
    CHECK(cmd_bound(req, opts, out, err) == expected);
    return expected == kExitOk ? Json::parse(out.str()) : Json(err.str());
  };
  BoundRequest q;
  q.n = 3;
  q.theta = 1.5707963;
  q.r = 0.3333333;
  CHECK(std::abs(run(q, kExitOk)["error_lower"].get<double>() - 0.5556) <= 1e-4);
  q = {};
  q.n = 2;
  q.theta = 0.0;
  q.r = 1.0;
  CHECK(run(q, kExitOk)["success_upper"].get<double>() == 0.5);

  BoundRequest s;
  s.kind = BoundRequest::Kind::spin;
  s.two_j = 2;
  s.alpha = 0.5;
  s.thetas = {0.0, 2.0943951, 4.1887902};
  CHECK(std::abs(run(s, kExitOk)["success_upper"].get<double>() -
                 (1.0 + std::sqrt(2.0) * 0.5) / 3.0) <= 1e-9);
  s.alpha = 2.0;
  CHECK(run(s, kExitInputError).get<std::string>().find("not positive") != std::string::npos);

  BoundRequest f;
  f.kind = BoundRequest::Kind::file;
  f.path = fixture("trine_mixed.json");
  CHECK(std::abs(run(f, kExitOk)["error_lower"].get<double>() - 5.0 / 9.0) <= 1e-11);
  f.path = fixture("asymmetric_qubits.json");
  CHECK(run(f, kExitInputError).get<std::string>().find("compare") != std::string::npos);
}

TEST_CASE("discriminate command") {
  RunOptions opts;
  opts.format = "json";
  std::ostringstream out, err;
  CHECK(cmd_discriminate(fixture("symmetric_pure_n5.json"), opts, out, err) == kExitOk);
  const Json doc = Json::parse(out.str());
  CHECK(std::abs(doc["success"].get<double>() - (1.0 + std::sin(1.0)) / 5.0) <= 1e-6);
  CHECK(doc["povm"].size() == 5);

  std::ostringstream out2, err2;
  CHECK(cmd_discriminate(fixture("duplicate_pure.json"), opts, out2, err2) == kExitOk);
  CHECK(Json::parse(out2.str())["success"].get<double>() == doctest::Approx(1.0 / 3.0));

  std::ostringstream out3, err3;
  CHECK(cmd_discriminate(fixture("ragged.json"), opts, out3, err3) == kExitInputError);
}

TEST_CASE("check command flags corrupted orderings") {
  RunOptions opts;
  std::ostringstream out, err;
  CHECK(cmd_check(fixture("corrupted_report.json"), opts, out, err) == kExitCheckFailed);
  CHECK(err.str().find("ordering violated") != std::string::npos);

  std::ostringstream out2, err2;
  CHECK(cmd_check(fixture("trine_report.json"), opts, out2, err2) == kExitOk);
  std::ostringstream out3, err3;
  CHECK(cmd_check(fixture("not_json.json"), opts, out3, err3) == kExitInputError);
}
