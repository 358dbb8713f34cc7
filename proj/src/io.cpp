#include "ofdr/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ofdr/procedure.hpp"

namespace ofdr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool skip_line(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::size_t parse_index(std::string_view text, const std::string& where) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("bad integer '" + std::string(text) + "'" + where);
  }
  return value;
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("bad number '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

std::vector<Observation> ingest_csv(std::istream& in, EvidenceKind kind,
                                    std::string_view deadline_column) {
  const std::string_view value_column = kind == EvidenceKind::e_value ? "e_value" : "p_value";
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    for (auto col : split(line)) header.emplace_back(col);
    break;
  }
  if (header.empty()) return {};
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto idx_col = column("index");
  const auto val_col = column(value_column);
  if (!idx_col || !val_col) {
    throw ParseError("header must contain 'index' and '" + std::string(value_column) + "'");
  }
  const auto null_col = column("is_null");
  const auto deadline_col = column(deadline_column);

  std::vector<Observation> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const std::string where = " at line " + std::to_string(line_no);
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields" + where);
    }
    Observation obs;
    obs.kind = kind;
    obs.index = parse_index(fields[*idx_col], where);
    if (obs.index != out.size() + 1) {
      throw ParseError("indices must be contiguous starting at 1; got " + std::to_string(obs.index) +
                       where);
    }
    if (fields[*val_col].empty()) throw ParseError("missing evidence" + where);
    obs.value = parse_double(fields[*val_col], std::string(value_column) + where);
    if (std::isnan(obs.value)) throw ParseError("NaN evidence" + where);
    if (null_col && !fields[*null_col].empty()) {
      const auto f = fields[*null_col];
      if (f == "1" || f == "true") {
        obs.is_null = true;
      } else if (f == "0" || f == "false") {
        obs.is_null = false;
      } else {
        throw ParseError("is_null must be 0/1/true/false" + where);
      }
    }
    if (deadline_col && !fields[*deadline_col].empty()) {
      const auto f = fields[*deadline_col];
      if (f != "inf") obs.deadline = parse_index(f, where);
    }
    try {
      obs.validate();
    } catch (const InputError& err) {
      throw ParseError(std::string(err.what()) + where);
    }
    out.push_back(obs);
  }
  return out;
}

std::vector<Observation> ingest_csv(const std::string& path, EvidenceKind kind,
                                    std::string_view deadline_column) {
  auto in = open_file(path);
  return ingest_csv(in, kind, deadline_column);
}

void write_observations_csv(std::ostream& out, std::span<const Observation> obs) {
  const bool e = obs.empty() || obs.front().kind == EvidenceKind::e_value;
  out << "index," << (e ? "e_value" : "p_value") << ",is_null,deadline\n";
  for (const auto& o : obs) {
    out << o.index << ',' << format_double(o.value) << ',';
    if (o.is_null) out << (*o.is_null ? '1' : '0');
    out << ',';
    if (o.deadline) out << *o.deadline;
    out << '\n';
  }
}

std::vector<Window> read_windows(std::istream& in) {
  std::vector<Window> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto fields = split(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() >= 1 && !fields[0].empty() &&
          !std::isdigit(static_cast<unsigned char>(fields[0][0]))) {
        continue;  // header row
      }
    }
    const std::string where = " at line " + std::to_string(line_no);
    if (fields.size() != 2) throw ParseError("window rows need start_index,end_index" + where);
    Window w{parse_index(fields[0], where), parse_index(fields[1], where)};
    if (w.start == 0 || w.end < w.start) throw ParseError("window must satisfy 1 <= start <= end" + where);
    out.push_back(w);
  }
  return out;
}

std::vector<Window> read_windows(const std::string& path) {
  auto in = open_file(path);
  return read_windows(in);
}

GammaSequence read_gamma_file(const std::string& path, const GammaSequence& tail) {
  auto in = open_file(path);
  std::vector<double> head;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto fields = split(line);
    if (!header_seen) {
      header_seen = true;
      if (!fields.empty() && !fields[0].empty() &&
          !std::isdigit(static_cast<unsigned char>(fields[0][0]))) {
        continue;
      }
    }
    const std::string where = " at line " + std::to_string(line_no);
    if (fields.size() != 2) throw ParseError("gamma rows need t,gamma_t" + where);
    const std::size_t t = parse_index(fields[0], where);
    if (t != head.size() + 1) throw ParseError("gamma indices must be contiguous from 1" + where);
    const double g = parse_double(fields[1], "gamma" + where);
    if (!(g >= 0.0)) throw ParseError("gamma must be nonnegative" + where);
    head.push_back(g);
  }
  return GammaSequence::tabulated(std::move(head), tail);
}

GammaSequence resolve_gamma(const std::string& spec, const std::string& tail_rule) {
  if (spec == "default" || spec.starts_with("constant:") || spec.starts_with("power:")) {
    return GammaSequence::from_name(spec);
  }
  return read_gamma_file(spec, GammaSequence::from_name(tail_rule));
}

RunSummary run_stream(const RunConfig& config, std::span<const Observation> obs, std::ostream& out) {
  ProcedureOptions po;
  po.delta = config.delta;
  po.gamma = resolve_gamma(config.gamma, config.gamma_tail);
  po.seed = config.seed;
  auto proc = make_procedure(config.procedure, po);
  if (config.evidence && *config.evidence != proc->kind()) {
    throw ConfigError("procedure '" + config.procedure + "' expects " +
                      (proc->kind() == EvidenceKind::e_value ? "e-values" : "p-values"));
  }
  out << kDecisionLogVersion << '\n' << "t,alpha,decision,num_rejections,wealth\n";
  RunSummary summary;
  for (const auto& o : obs) {
    if (o.kind != proc->kind()) throw ConfigError("observation kind does not match the procedure");
    const StepOutcome step = proc->step(o.value, o.deadline.value_or(kNoDeadline));
    out << o.index << ',' << (std::isnan(step.alpha) ? "" : format_double(step.alpha)) << ','
        << (step.decision ? 1 : 0) << ',' << proc->num_rejections() << ',';
    if (step.wealth) out << format_double(*step.wealth);
    out << '\n';
    ++summary.steps;
  }
  summary.rejected = proc->rejected();
  std::sort(summary.rejected.begin(), summary.rejected.end());
  summary.rejections = summary.rejected.size();
  if (!config.windows.empty()) {
    for (std::size_t i : summary.rejected) {
      for (const auto& w : config.windows) {
        if (i >= w.start && i <= w.end) {
          ++summary.rejections_in_windows;
          break;
        }
      }
    }
    for (const auto& w : config.windows) {
      const bool hit = std::any_of(summary.rejected.begin(), summary.rejected.end(),
                                   [&](std::size_t i) { return i >= w.start && i <= w.end; });
      summary.windows_detected += hit ? 1 : 0;
    }
    out << "# windows=" << config.windows.size() << ",detected=" << summary.windows_detected
        << ",rejections_in_windows=" << summary.rejections_in_windows
        << ",total_rejections=" << summary.rejections << '\n';
  }
  return summary;
}

}  // namespace ofdr
