#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpp/eval.hpp"
#include "fpp/isotropy.hpp"
#include "fpp/linalg.hpp"
#include "fpp/postprocess.hpp"

namespace fpp::io {

// Binary layouts. All integers are unsigned 32-bit little-endian, all reals
// IEEE-754 binary64 little-endian, no padding.
//
//   features: "FPF1" version n d dtype:u8(0) then n*d reals, row-major
//   labels:   "FPL1" version n then n signed 32-bit class ids
//   model:    "FPPM" version D T N then mean[D], eigenvalues[T], directions[T*D]
inline constexpr std::uint32_t kFeatureVersion = 1;
inline constexpr std::uint32_t kLabelVersion = 1;
inline constexpr std::uint32_t kModelVersion = 1;

std::vector<unsigned char> encode_features(const Matrix& features);
Matrix decode_features(const std::vector<unsigned char>& bytes);

std::vector<unsigned char> encode_labels(const std::vector<int>& labels);
std::vector<int> decode_labels(const std::vector<unsigned char>& bytes);

std::vector<unsigned char> encode_model(const PostprocessModel& model);
/// Re-validates the model invariants (orthonormality, ordering) to 1e-6.
PostprocessModel decode_model(const std::vector<unsigned char>& bytes);

// File wrappers. A path of "-" means standard input/output.
std::vector<unsigned char> read_bytes(const std::string& path);
void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes);

Matrix read_features(const std::string& path);
void write_features(const std::string& path, const Matrix& features);
std::vector<int> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<int>& labels);
PostprocessModel read_model(const std::string& path);
void write_model(const std::string& path, const PostprocessModel& model);

struct CsvData {
  Matrix features;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> label_names;  // index = dense id, first-appearance order
};

/// Comma-separated numeric table with '.' decimals. `label_column` is either
/// a header name or a zero-based column index; that column is read as opaque
/// strings and mapped to dense ids.
CsvData parse_csv(std::string_view text, bool has_header,
                  const std::optional<std::string>& label_column = std::nullopt);
CsvData read_csv(const std::string& path, bool has_header,
                 const std::optional<std::string>& label_column = std::nullopt);

enum class ReportFormat { Text, Machine };

ReportFormat parse_report_format(std::string_view s);

/// `key = value` lines (Text) or a JSON object (Machine). Reals are written in
/// shortest round-trip form so that parsing recovers them bit for bit.
std::string render_report(const IsotropyReport& report, ReportFormat format);
IsotropyReport parse_isotropy_report(std::string_view text, ReportFormat format);

std::string render_report(const EvalReport& report, ReportFormat format);
EvalReport parse_eval_report(std::string_view text, ReportFormat format);

/// Text: the one-line summary row; Machine: JSON with every summary field.
std::string render_spectrum(const std::string& name, const SpectrumSummary& summary,
                            ReportFormat format);

/// Header plus one row per t.
std::string render_sweep_table(const std::vector<SweepRow>& rows, char delimiter = ',');

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace fpp::io
