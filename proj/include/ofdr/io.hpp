#pragma once
// Stream CSV input, decision-log output and anomaly-window summaries.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofdr/core.hpp"

namespace ofdr {

/// Thrown for malformed input files; the message names the offending line.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);
/// Strict decimal parse; throws ParseError on trailing garbage.
double parse_double(std::string_view text, std::string_view what);

/// Reads observations from a CSV with header columns `index` and `e_value` or
/// `p_value` (per `kind`), plus optional `is_null` and deadline columns. Lines
/// starting with '#' and blank lines are skipped. Indices must run 1, 2, 3, ...
std::vector<Observation> ingest_csv(std::istream& in, EvidenceKind kind,
                                    std::string_view deadline_column = "deadline");
std::vector<Observation> ingest_csv(const std::string& path, EvidenceKind kind,
                                    std::string_view deadline_column = "deadline");

/// Writes observations in the format ingest_csv reads.
void write_observations_csv(std::ostream& out, std::span<const Observation> obs);

/// Inclusive index range [start, end].
struct Window {
  std::size_t start = 0;
  std::size_t end = 0;
};
std::vector<Window> read_windows(std::istream& in);
std::vector<Window> read_windows(const std::string& path);

/// Reads (t, gamma_t) rows for t = 1..n and continues with `tail` beyond n.
GammaSequence read_gamma_file(const std::string& path, const GammaSequence& tail);
/// A rule name ("default", "constant:c", "power:a") or a path to a gamma CSV.
GammaSequence resolve_gamma(const std::string& spec, const std::string& tail_rule = "default");

struct RunConfig {
  std::string procedure = "elond";
  double delta = 0.1;
  std::string gamma = "default";
  std::string gamma_tail = "default";
  std::optional<EvidenceKind> evidence;
  std::string deadline_column = "deadline";
  std::optional<std::uint64_t> seed;
  std::vector<Window> windows;
};

struct RunSummary {
  std::size_t steps = 0;
  std::size_t rejections = 0;
  std::size_t rejections_in_windows = 0;
  std::size_t windows_detected = 0;
  IndexSet rejected;
};

inline constexpr std::string_view kDecisionLogVersion = "# ofdr decision-log v1";

/// Runs the configured procedure over `obs` and writes the decision log:
/// a version comment, then t,alpha,decision,num_rejections,wealth rows.
/// With windows, a trailing comment line summarizes rejections inside them.
RunSummary run_stream(const RunConfig& config, std::span<const Observation> obs, std::ostream& out);

}  // namespace ofdr
