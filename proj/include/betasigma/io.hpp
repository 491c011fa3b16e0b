#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "betasigma/autoselect.hpp"
#include "betasigma/errors.hpp"
#include "betasigma/estimators.hpp"
#include "betasigma/series.hpp"

namespace betasigma {

enum class FileFormat { Auto, TwoColumn, OneColumn };
enum class InferredSampling { Equidistant, Irregular, Unknown };
enum class OutputFormat { Json, Tsv };

inline const char* sampling_name(InferredSampling s) {
  switch (s) {
    case InferredSampling::Equidistant: return "equidistant";
    case InferredSampling::Irregular: return "irregular";
    case InferredSampling::Unknown: return "unknown";
  }
  return "unknown";
}

/// What ingestion saw: row counts, cleaning outcome, and the sampling pattern
/// inferred from the position column.
struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
  bool monotonicity_ok = true;
  InferredSampling inferred_sampling = InferredSampling::Unknown;
};

struct ReadOptions {
  FileFormat format = FileFormat::Auto;
  /// Explicit column delimiter; when unset the first data line picks among
  /// comma, semicolon, and whitespace.
  std::optional<char> delimiter;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_tokens(std::string_view line, std::optional<char> delim) {
  std::vector<std::string_view> tokens;
  if (!delim) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t begin = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > begin) tokens.push_back(line.substr(begin, i - begin));
    }
  } else {
    std::size_t begin = 0;
    while (begin <= line.size()) {
      std::size_t end = line.find(*delim, begin);
      if (end == std::string_view::npos) end = line.size();
      tokens.push_back(trim(line.substr(begin, end - begin)));
      begin = end + 1;
      if (end == line.size()) break;
    }
  }
  return tokens;
}

inline bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && !token.empty();
}

}  // namespace detail

/// Reads a column data file. Lines starting with '#' are comments; rows with
/// unparseable, NaN, or infinite values are dropped and counted. One-column
/// files live on the implicit grid; two-column files must have a strictly
/// increasing first column after cleaning.
inline std::pair<SeriesData, IngestReport> read_series(const std::filesystem::path& path,
                                                       const ReadOptions& options = {}) {
  std::ifstream file(path);
  if (!file) raise(Errc::ParseError, "cannot open " + path.string());

  SeriesData data;
  IngestReport report;
  std::vector<double> positions;
  std::optional<char> delim = options.delimiter;
  bool delim_resolved = options.delimiter.has_value();
  FileFormat format = options.format;

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;

    if (!delim_resolved) {  // the first data line fixes the delimiter
      if (view.find(',') != std::string_view::npos) delim = ',';
      else if (view.find(';') != std::string_view::npos) delim = ';';
      delim_resolved = true;
    }
    const auto tokens = detail::split_tokens(view, delim);
    if (format == FileFormat::Auto)
      format = tokens.size() >= 2 ? FileFormat::TwoColumn : FileFormat::OneColumn;

    ++report.rows_read;
    if (format == FileFormat::OneColumn) {
      if (tokens.size() != 1)
        raise(Errc::ParseError,
              path.string() + ":" + std::to_string(line_number) + ": expected a single column");
      double value;
      if (!detail::parse_double(tokens[0], value) || !std::isfinite(value)) {
        ++report.rows_dropped;
        continue;
      }
      data.y.push_back(value);
    } else {
      if (tokens.size() < 2)
        raise(Errc::ParseError,
              path.string() + ":" + std::to_string(line_number) + ": expected two columns");
      double t, y;
      if (!detail::parse_double(tokens[0], t) || !detail::parse_double(tokens[1], y) ||
          !std::isfinite(t) || !std::isfinite(y)) {
        ++report.rows_dropped;
        continue;
      }
      positions.push_back(t);
      data.y.push_back(y);
    }
  }

  if (report.rows_read == 0) raise(Errc::EmptyFile, path.string() + " has no data rows");
  if (data.y.empty()) raise(Errc::EmptyFile, path.string() + ": every row was dropped");

  if (format == FileFormat::OneColumn) {
    report.inferred_sampling = InferredSampling::Equidistant;
    return {std::move(data), report};
  }

  for (std::size_t i = 0; i + 1 < positions.size(); ++i)
    if (!(positions[i + 1] > positions[i])) {
      report.monotonicity_ok = false;
      raise(Errc::NonMonotonicPositions,
            path.string() + ": positions not strictly increasing near row " + std::to_string(i + 1));
    }

  if (positions.size() < 2) {
    report.inferred_sampling = InferredSampling::Unknown;
  } else {
    std::vector<double> steps(positions.size() - 1);
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) steps[i] = positions[i + 1] - positions[i];
    const double med = detail::median(steps);
    double max_dev = 0.0;
    for (double s : steps) max_dev = std::max(max_dev, std::abs(s - med));
    report.inferred_sampling =
        max_dev < 1e-6 * med ? InferredSampling::Equidistant : InferredSampling::Irregular;
  }
  data.t = std::move(positions);
  return {std::move(data), report};
}

struct ResultOptions {
  std::optional<double> snr;
  bool include_trace = true;  // JSON output of auto-selection results
  bool tsv_header = true;
};

namespace detail {

/// Numbers are rendered with 9 significant digits everywhere results are
/// serialized, which also makes the output byte-stable.
inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string flags_json(const EstimateFlags& flags) {
  std::string out = "[";
  bool first = true;
  auto push = [&](const char* name) {
    if (!first) out += ",";
    out += "\"";
    out += name;
    out += "\"";
    first = false;
  };
  if (flags.degenerate) push("degenerate");
  if (flags.robust_stderr_scaled) push("robust_stderr_scaled");
  if (flags.stderr_uncorrected) push("stderr_uncorrected");
  out += "]";
  return out;
}

inline std::string flags_tsv(const EstimateFlags& flags) {
  std::string out;
  auto push = [&](const char* name) {
    if (!out.empty()) out += ",";
    out += name;
  };
  if (flags.degenerate) push("degenerate");
  if (flags.robust_stderr_scaled) push("robust_stderr_scaled");
  if (flags.stderr_uncorrected) push("stderr_uncorrected");
  return out.empty() ? "-" : out;
}

inline std::string estimate_json_fields(const NoiseEstimate& est, const ResultOptions& options) {
  std::string out;
  out += "\"sigma_hat\":" + fmt9(est.sigma_hat);
  out += ",\"stderr\":" + fmt9(est.std_error);
  out += ",\"estimator\":\"" + std::string(estimator_name(est.estimator)) + "\"";
  out += ",\"order\":" + std::to_string(est.order);
  out += ",\"jump\":" + std::to_string(est.jump);
  out += ",\"mode\":\"" + std::string(mode_name(est.mode)) + "\"";
  out += ",\"n_beta\":" + std::to_string(est.n_beta);
  out += ",\"flags\":" + flags_json(est.flags);
  if (options.snr) out += ",\"snr\":" + fmt9(*options.snr);
  return out;
}

inline std::string estimate_tsv(const NoiseEstimate& est, const ResultOptions& options,
                                bool with_header) {
  std::string out;
  if (with_header)
    out += "sigma_hat\tstderr\testimator\torder\tjump\tmode\tn_beta\tflags\tsnr\n";
  out += fmt9(est.sigma_hat) + "\t" + fmt9(est.std_error) + "\t" + estimator_name(est.estimator) +
         "\t" + std::to_string(est.order) + "\t" + std::to_string(est.jump) + "\t" +
         mode_name(est.mode) + "\t" + std::to_string(est.n_beta) + "\t" + flags_tsv(est.flags) +
         "\t" + (options.snr ? fmt9(*options.snr) : std::string("-")) + "\n";
  return out;
}

}  // namespace detail

/// Serializes a single estimate. JSON is a single object on one line; TSV is
/// an optional header plus one row.
inline std::string write_result(const NoiseEstimate& est, OutputFormat format,
                                const ResultOptions& options = {}) {
  if (format == OutputFormat::Tsv) return detail::estimate_tsv(est, options, options.tsv_header);
  return "{" + detail::estimate_json_fields(est, options) + "}\n";
}

/// Serializes an auto-selection result. The JSON object carries the final
/// estimate's fields plus `converged` and, when requested, the iteration
/// trace in order.
inline std::string write_result(const AutoSelectResult& result, OutputFormat format,
                                const ResultOptions& options = {}) {
  if (format == OutputFormat::Tsv)
    return detail::estimate_tsv(result.final, options, options.tsv_header);
  std::string out = "{" + detail::estimate_json_fields(result.final, options);
  out += ",\"converged\":";
  out += result.converged ? "true" : "false";
  if (options.include_trace) {
    out += ",\"trace\":[";
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
      const AutoTraceEntry& entry = result.trace[i];
      if (i) out += ",";
      out += "{\"order\":" + std::to_string(entry.order);
      out += ",\"jump\":" + std::to_string(entry.jump);
      out += ",\"sigma_hat\":" + detail::fmt9(entry.base.sigma_hat);
      out += ",\"stderr\":" + detail::fmt9(entry.base.std_error);
      out += ",\"sigma_hat_next_order\":" + detail::fmt9(entry.next_order.sigma_hat);
      out += ",\"stderr_next_order\":" + detail::fmt9(entry.next_order.std_error);
      out += ",\"sigma_hat_next_order_jump\":" + detail::fmt9(entry.next_order_jump.sigma_hat);
      out += ",\"stderr_next_order_jump\":" + detail::fmt9(entry.next_order_jump.std_error);
      out += ",\"decision\":\"" + std::string(decision_name(entry.decision)) + "\"}";
    }
    out += "]";
  }
  out += "}\n";
  return out;
}

}  // namespace betasigma
