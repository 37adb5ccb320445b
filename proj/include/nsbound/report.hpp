#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsbound/discrim.hpp"
#include "nsbound/nosignal.hpp"
#include "nsbound/oracle.hpp"
#include "nsbound/states.hpp"

namespace nsbound {

using Json = nlohmann::json;

/// Malformed or unsupported input; maps to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInputError = 2 };

/// Slack allowed when comparing the oracle against an upper bound.
inline constexpr double kOrderingSlack = 1e-6;
/// Tolerance for recognizing a file ensemble as a symmetric qubit family.
inline constexpr double kSymmetryMatchTol = 1e-8;

struct RunOptions {
  std::string format = "table";  // table | json | csv
  std::string out;               // JSON copy of the result, if non-empty
  std::uint64_t seed = 0;
  int restarts = 5;
  int max_iters = 10000;
  double tol = kCertificateTol;

  OracleOptions oracle() const { return {max_iters, tol, false}; }
};

// Serialization of the shared matrix encoding: rows of [re, im] pairs.
Json complex_to_json(Complex z);
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, std::size_t dim);

/// {"dim": d, "states": [{"prior": p, "matrix": [[[re, im], ...], ...]}, ...]}
Ensemble ensemble_from_json(const Json& j);
Json ensemble_to_json(const Ensemble& ensemble);
Ensemble load_ensemble_file(const std::string& path);

struct QubitSymmetry {
  int n;
  double theta;  // polar angle about the detected symmetry axis, in [0, pi]
  double r;
};

/// Recognizes equal-prior qubit ensembles whose Bloch vectors form a regular
/// polygon about some axis (state order is irrelevant).
std::optional<QubitSymmetry> detect_symmetric_qubit(const Ensemble& ensemble,
                                                    double tol = kSymmetryMatchTol);

struct NsEntry {
  double success_upper;
  double error_lower;
  std::string construction;
};

struct OracleEntry {
  double success;
  double certificate_gap;
  bool converged;
};

struct ClosedForm {
  double value;
  std::string formula;
};

struct Orderings {
  bool oracle_le_one_minus_l4 = true;
  std::optional<bool> oracle_le_ns_bound;

  bool ok() const { return oracle_le_one_minus_l4 && oracle_le_ns_bound.value_or(true); }
};

struct ReportRecord {
  std::string id;
  std::size_t n_states = 0;
  std::size_t dim = 0;
  std::optional<NsEntry> ns_bound;
  L4Bound l4{0.0, 1.0};
  OracleEntry oracle{0.0, 0.0, false};
  std::optional<ClosedForm> closed_form;
  Orderings orderings;
};

Orderings compute_orderings(const ReportRecord& record);

/// Fills L4, the restarted oracle and the orderings for `ensemble`.
ReportRecord analyze(const std::string& id, const Ensemble& ensemble,
                     std::optional<NsEntry> ns_bound, std::optional<ClosedForm> closed_form,
                     const RunOptions& options);

/// Numbers are rounded to 12 significant digits.
Json record_to_json(const ReportRecord& record);
ReportRecord record_from_json(const Json& j);

struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

struct Reproduction {
  std::vector<ReportRecord> records;
  std::vector<Check> checks;

  bool ok() const;
};

/// Trine of mixed states rotated about the y axis: rho_0 = (I - sigma_z / 3) / 2.
Ensemble trine_mixed_y_frame();

/// Polar angles of the 25-point qubit sweep grid in (0.05, pi - 0.05).
std::vector<double> qubit_sweep_thetas();

Reproduction run_reproduction(const RunOptions& options);

Json document_json(const std::string& command, const std::vector<ReportRecord>& records,
                   const std::vector<Check>& checks);

struct BoundRequest {
  enum class Kind { qubit, spin, file } kind = Kind::qubit;
  int n = 2;
  double theta = 0.0;
  double r = 1.0;
  int two_j = 2;
  double alpha = 0.0;
  std::vector<double> thetas;
  std::string path;
};

int cmd_reproduce(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_bound(const BoundRequest& request, const RunOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_compare(const std::string& path, const RunOptions& options, std::ostream& out,
                std::ostream& err);
int cmd_discriminate(const std::string& path, const RunOptions& options, std::ostream& out,
                     std::ostream& err);
/// Re-derives the orderings of a saved report from its numbers.
int cmd_check(const std::string& path, const RunOptions& options, std::ostream& out,
              std::ostream& err);

}  // namespace nsbound
