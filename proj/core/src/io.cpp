#include "fpp/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <unordered_map>

#include "fpp/error.hpp"
#include "json.hpp"

namespace fpp::io {

namespace {

constexpr std::size_t kFeatureHeader = 4 + 4 + 4 + 4 + 1;
constexpr std::size_t kLabelHeader = 4 + 4 + 4;
constexpr std::size_t kModelHeader = 4 + 4 + 4 + 4 + 4;

class Writer {
 public:
  void magic(std::string_view m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) bytes_.push_back(static_cast<unsigned char>(v >> s));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int s = 0; s < 64; s += 8) bytes_.push_back(static_cast<unsigned char>(bits >> s));
  }
  std::vector<unsigned char> take() { return std::move(bytes_); }

 private:
  std::vector<unsigned char> bytes_;
};

// Caller checks the total length up front, so reads here never run past the end.
class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  bool magic_is(std::string_view m) {
    const bool ok = bytes_.size() >= m.size() &&
                    std::memcmp(bytes_.data(), m.data(), m.size()) == 0;
    pos_ += m.size();
    return ok;
  }
  std::uint8_t u8() { return bytes_[pos_++]; }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int s = 0; s < 32; s += 8) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << s;
    return v;
  }
  double f64() {
    std::uint64_t bits = 0;
    for (int s = 0; s < 64; s += 8) bits |= static_cast<std::uint64_t>(bytes_[pos_++]) << s;
    return std::bit_cast<double>(bits);
  }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) fail(ErrorKind::InvalidArgument, std::string(what) + " exceeds 32 bits");
  return static_cast<std::uint32_t>(v);
}

void check_magic(const std::vector<unsigned char>& bytes, std::string_view magic,
                 const char* what) {
  if (bytes.size() < magic.size() ||
      std::memcmp(bytes.data(), magic.data(), magic.size()) != 0) {
    fail(ErrorKind::BadMagic, std::string(what) + ": bad magic, expected \"" +
                                  std::string(magic) + "\"");
  }
}

void check_length(std::size_t actual, std::size_t expected, const char* what) {
  if (actual < expected) {
    fail(ErrorKind::Truncated, std::string(what) + ": truncated, expected " +
                                   std::to_string(expected) + " bytes, got " +
                                   std::to_string(actual));
  }
  if (actual > expected) {
    fail(ErrorKind::TrailingData, std::string(what) + ": " + std::to_string(actual - expected) +
                                      " unexpected trailing bytes after " +
                                      std::to_string(expected));
  }
}

void check_version(std::uint32_t version, std::uint32_t supported, const char* what) {
  if (version != supported) {
    fail(ErrorKind::UnsupportedVersion, std::string(what) + ": unsupported format version " +
                                            std::to_string(version));
  }
}

// ---- key/value report plumbing -------------------------------------------

enum class FieldType { Integer, Real, Text };

struct Field {
  std::string key;
  std::string value;
  FieldType type;
};

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view s, std::string_view key) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    fail(ErrorKind::Parse, "report field '" + std::string(key) + "': '" + std::string(s) +
                               "' is not a number");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view s, std::string_view key) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(ErrorKind::Parse, "report field '" + std::string(key) + "': '" + std::string(s) +
                               "' is not an unsigned integer");
  }
  return v;
}

Field integer(std::string key, std::uint64_t v) {
  return {std::move(key), std::to_string(v), FieldType::Integer};
}
Field real(std::string key, double v) {
  return {std::move(key), format_real(v), FieldType::Real};
}
Field text(std::string key, std::string_view v) {
  return {std::move(key), std::string(v), FieldType::Text};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string render_fields(const std::vector<Field>& fields, ReportFormat format) {
  if (format == ReportFormat::Text) {
    std::string out;
    for (const auto& f : fields) out += f.key + " = " + f.value + "\n";
    return out;
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& f : fields) {
    switch (f.type) {
      case FieldType::Integer:
        j[f.key] = parse_unsigned(f.value, f.key);
        break;
      case FieldType::Real: {
        const double v = parse_real(f.value, f.key);
        if (std::isfinite(v)) {
          j[f.key] = v;
        } else {
          j[f.key] = f.value;
        }
        break;
      }
      case FieldType::Text:
        j[f.key] = f.value;
        break;
    }
  }
  return j.dump(2) + "\n";
}

class FieldMap {
 public:
  FieldMap(std::string_view doc, ReportFormat format) {
    if (format == ReportFormat::Text) {
      std::size_t line_no = 0;
      while (!doc.empty()) {
        const auto nl = doc.find('\n');
        std::string_view line = doc.substr(0, nl);
        doc = nl == std::string_view::npos ? std::string_view{} : doc.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
          fail(ErrorKind::Parse, "report line " + std::to_string(line_no) + " has no '='");
        }
        values_[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
      }
      return;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(doc);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Parse, std::string("report JSON: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::Parse, "report JSON is not an object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string()) {
        values_[key] = value.get<std::string>();
      } else if (value.is_number_unsigned()) {
        values_[key] = std::to_string(value.get<std::uint64_t>());
      } else if (value.is_number()) {
        values_[key] = format_real(value.get<double>());
      } else {
        fail(ErrorKind::Parse, "report JSON field '" + key + "' has an unsupported type");
      }
    }
  }

  const std::string& get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) fail(ErrorKind::Parse, "report is missing field '" + key + "'");
    return it->second;
  }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double real(const std::string& key) const { return parse_real(get(key), key); }
  std::size_t count(const std::string& key) const {
    return static_cast<std::size_t>(parse_unsigned(get(key), key));
  }

 private:
  std::unordered_map<std::string, std::string> values_;
};

std::string render_per_class(const std::map<int, double>& m) {
  std::string out;
  for (const auto& [cls, acc] : m) {
    if (!out.empty()) out += ',';
    out += std::to_string(cls) + ':' + format_real(acc);
  }
  return out;
}

std::map<int, double> parse_per_class(std::string_view s, std::string_view key) {
  std::map<int, double> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const std::string_view item = s.substr(0, comma);
    s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      fail(ErrorKind::Parse, "report field '" + std::string(key) + "' is malformed");
    }
    int cls = 0;
    const auto cls_text = item.substr(0, colon);
    const auto res = std::from_chars(cls_text.data(), cls_text.data() + cls_text.size(), cls);
    if (res.ec != std::errc() || res.ptr != cls_text.data() + cls_text.size()) {
      fail(ErrorKind::Parse, "report field '" + std::string(key) + "' has a bad class id");
    }
    out[cls] = parse_real(item.substr(colon + 1), key);
  }
  return out;
}

// ---- CSV -----------------------------------------------------------------

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto comma = line.find(',');
    out.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  return out;
}

}  // namespace

std::vector<unsigned char> encode_features(const Matrix& features) {
  Writer w;
  w.magic("FPF1");
  w.u32(kFeatureVersion);
  w.u32(checked_u32(features.rows(), "row count"));
  w.u32(checked_u32(features.cols(), "column count"));
  w.u8(0);
  for (double v : features.data()) w.f64(v);
  return w.take();
}

Matrix decode_features(const std::vector<unsigned char>& bytes) {
  check_magic(bytes, "FPF1", "feature file");
  if (bytes.size() < kFeatureHeader) check_length(bytes.size(), kFeatureHeader, "feature file");
  Reader r(bytes);
  r.magic_is("FPF1");
  check_version(r.u32(), kFeatureVersion, "feature file");
  const std::size_t n = r.u32();
  const std::size_t d = r.u32();
  if (const auto dtype = r.u8(); dtype != 0) {
    fail(ErrorKind::UnsupportedVersion, "feature file: unsupported dtype " + std::to_string(dtype));
  }
  check_length(bytes.size(), kFeatureHeader + n * d * 8, "feature file");
  std::vector<double> data(n * d);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = r.f64();
    if (!std::isfinite(data[i])) {
      fail(ErrorKind::NonFinite, "feature file: non-finite value at row " +
                                     std::to_string(i / d) + ", column " + std::to_string(i % d));
    }
  }
  return Matrix(n, d, std::move(data));
}

std::vector<unsigned char> encode_labels(const std::vector<int>& labels) {
  Writer w;
  w.magic("FPL1");
  w.u32(kLabelVersion);
  w.u32(checked_u32(labels.size(), "label count"));
  for (int v : labels) w.u32(static_cast<std::uint32_t>(v));
  return w.take();
}

std::vector<int> decode_labels(const std::vector<unsigned char>& bytes) {
  check_magic(bytes, "FPL1", "label file");
  if (bytes.size() < kLabelHeader) check_length(bytes.size(), kLabelHeader, "label file");
  Reader r(bytes);
  r.magic_is("FPL1");
  check_version(r.u32(), kLabelVersion, "label file");
  const std::size_t n = r.u32();
  check_length(bytes.size(), kLabelHeader + 4 * n, "label file");
  std::vector<int> labels(n);
  for (auto& v : labels) v = static_cast<int>(r.u32());
  return labels;
}

std::vector<unsigned char> encode_model(const PostprocessModel& model) {
  model.validate(1e-6);
  Writer w;
  w.magic("FPPM");
  w.u32(kModelVersion);
  w.u32(checked_u32(model.dim, "model dimension"));
  w.u32(checked_u32(model.t, "model t"));
  w.u32(checked_u32(model.source_count, "model source count"));
  for (double v : model.mean) w.f64(v);
  for (double v : model.eigenvalues) w.f64(v);
  for (const auto& u : model.directions)
    for (double v : u) w.f64(v);
  return w.take();
}

PostprocessModel decode_model(const std::vector<unsigned char>& bytes) {
  check_magic(bytes, "FPPM", "model file");
  if (bytes.size() < kModelHeader) check_length(bytes.size(), kModelHeader, "model file");
  Reader r(bytes);
  r.magic_is("FPPM");
  check_version(r.u32(), kModelVersion, "model file");
  PostprocessModel m;
  m.dim = r.u32();
  m.t = r.u32();
  m.source_count = r.u32();
  if (m.t > m.dim) {
    fail(ErrorKind::InvariantViolation, "model file: t " + std::to_string(m.t) +
                                            " exceeds dimension " + std::to_string(m.dim));
  }
  check_length(bytes.size(), kModelHeader + 8 * (m.dim + m.t + m.t * m.dim), "model file");
  m.mean.resize(m.dim);
  for (double& v : m.mean) v = r.f64();
  m.eigenvalues.resize(m.t);
  for (double& v : m.eigenvalues) v = r.f64();
  m.directions.assign(m.t, Vector(m.dim));
  for (auto& u : m.directions)
    for (double& v : u) v = r.f64();
  m.validate(1e-6);
  return m;
}

std::vector<unsigned char> read_bytes(const std::string& path) {
  if (path == "-") {
    std::cin >> std::noskipws;
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
  if (in.bad()) fail(ErrorKind::Io, "error while reading '" + path + "'");
  return bytes;
}

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  if (path == "-") {
    std::cout.write(reinterpret_cast<const char*>(bytes.data()),
                    static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    if (!std::cout) fail(ErrorKind::Io, "error writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "error while writing '" + path + "'");
}

Matrix read_features(const std::string& path) { return decode_features(read_bytes(path)); }
void write_features(const std::string& path, const Matrix& features) {
  write_bytes(path, encode_features(features));
}
std::vector<int> read_labels(const std::string& path) { return decode_labels(read_bytes(path)); }
void write_labels(const std::string& path, const std::vector<int>& labels) {
  write_bytes(path, encode_labels(labels));
}
PostprocessModel read_model(const std::string& path) { return decode_model(read_bytes(path)); }
void write_model(const std::string& path, const PostprocessModel& model) {
  write_bytes(path, encode_model(model));
}

CsvData parse_csv(std::string_view doc, bool has_header,
                  const std::optional<std::string>& label_column) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t line_no = 0;
  while (!doc.empty()) {
    const auto nl = doc.find('\n');
    const std::string_view line = doc.substr(0, nl);
    doc = nl == std::string_view::npos ? std::string_view{} : doc.substr(nl + 1);
    ++line_no;
    if (!trim(line).empty()) lines.emplace_back(line_no, line);
  }
  if (lines.empty() || (has_header && lines.size() == 1)) {
    fail(ErrorKind::EmptyInput, "CSV has no data rows");
  }

  std::vector<std::string_view> header;
  std::size_t first = 0;
  if (has_header) {
    header = split_fields(lines.front().second);
    first = 1;
  }
  const std::size_t width = has_header ? header.size() : split_fields(lines[first].second).size();

  std::optional<std::size_t> label_idx;
  if (label_column) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == *label_column) label_idx = c;
    }
    if (!label_idx) {
      std::size_t idx = 0;
      const auto& s = *label_column;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), idx);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size() || idx >= width) {
        fail(ErrorKind::InvalidArgument, "label column '" + s + "' not found");
      }
      label_idx = idx;
    }
  }

  const std::size_t cols = width - (label_idx ? 1 : 0);
  const std::size_t rows = lines.size() - first;
  std::vector<double> data;
  data.reserve(rows * cols);
  CsvData out;
  std::vector<int> labels;
  std::map<std::string, int, std::less<>> ids;
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto [ln, line] = lines[r];
    const auto fields = split_fields(line);
    if (fields.size() != width) {
      fail(ErrorKind::Parse, "CSV line " + std::to_string(ln) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (label_idx && c == *label_idx) {
        auto it = ids.find(fields[c]);
        if (it == ids.end()) {
          it = ids.emplace(std::string(fields[c]), static_cast<int>(out.label_names.size())).first;
          out.label_names.emplace_back(fields[c]);
        }
        labels.push_back(it->second);
        continue;
      }
      std::string_view cell = fields[c];
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        fail(ErrorKind::Parse, "CSV line " + std::to_string(ln) + ", column " +
                                   std::to_string(c + 1) + ": '" + std::string(fields[c]) +
                                   "' is not a number");
      }
      if (!std::isfinite(v)) {
        fail(ErrorKind::NonFinite, "CSV line " + std::to_string(ln) + ", column " +
                                       std::to_string(c + 1) + ": non-finite value");
      }
      data.push_back(v);
    }
  }
  out.features = Matrix(rows, cols, std::move(data));
  if (label_idx) out.labels = std::move(labels);
  return out;
}

CsvData read_csv(const std::string& path, bool has_header,
                 const std::optional<std::string>& label_column) {
  const auto bytes = read_bytes(path);
  return parse_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                   has_header, label_column);
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::Text;
  if (s == "machine") return ReportFormat::Machine;
  fail(ErrorKind::InvalidArgument, "unknown report format '" + std::string(s) + "'");
}

std::string render_report(const IsotropyReport& r, ReportFormat format) {
  return render_fields({integer("n", r.n), integer("dim", r.dim), real("h_min", r.h_min),
                        real("h_max", r.h_max), real("log_h_min", r.log_h_min),
                        real("log_h_max", r.log_h_max), real("m_empirical", r.m_empirical),
                        real("m_first_order", r.m_first_order),
                        real("m_second_order", r.m_second_order), real("sigma_min", r.sigma_min),
                        real("sigma_max", r.sigma_max), real("ones_proj_norm", r.ones_proj_norm)},
                       format);
}

IsotropyReport parse_isotropy_report(std::string_view doc, ReportFormat format) {
  const FieldMap f(doc, format);
  IsotropyReport r;
  r.n = f.count("n");
  r.dim = f.count("dim");
  r.h_min = f.real("h_min");
  r.h_max = f.real("h_max");
  r.log_h_min = f.real("log_h_min");
  r.log_h_max = f.real("log_h_max");
  r.m_empirical = f.real("m_empirical");
  r.m_first_order = f.real("m_first_order");
  r.m_second_order = f.real("m_second_order");
  r.sigma_min = f.real("sigma_min");
  r.sigma_max = f.real("sigma_max");
  r.ones_proj_norm = f.real("ones_proj_norm");
  return r;
}

std::string render_report(const EvalReport& r, ReportFormat format) {
  return render_fields(
      {text("evaluator", to_string(r.evaluator)), integer("k", r.params.k),
       text("metric", to_string(r.params.metric)), real("test_fraction", r.params.test_fraction),
       integer("pca_dim", r.params.pca_dim), text("fit_on", to_string(r.params.fit_on)),
       text("l2", to_string(r.params.l2)), integer("seed", r.seed),
       integer("train_size", r.train_size), integer("test_size", r.test_size),
       integer("t_used", r.t_used), real("accuracy_before", r.accuracy_before),
       real("accuracy_after", r.accuracy_after), integer("pair_count", r.pair_count),
       real("threshold_before", r.threshold_before), real("threshold_after", r.threshold_after),
       text("per_class_before", render_per_class(r.per_class_before)),
       text("per_class_after", render_per_class(r.per_class_after))},
      format);
}

EvalReport parse_eval_report(std::string_view doc, ReportFormat format) {
  const FieldMap f(doc, format);
  EvalReport r;
  r.evaluator = parse_evaluator(f.get("evaluator"));
  r.params.evaluator = r.evaluator;
  r.params.k = f.count("k");
  r.params.metric = parse_metric(f.get("metric"));
  r.params.test_fraction = f.real("test_fraction");
  r.params.pca_dim = f.count("pca_dim");
  r.params.fit_on = parse_fit_on(f.get("fit_on"));
  r.params.l2 = parse_l2_mode(f.get("l2"));
  r.seed = parse_unsigned(f.get("seed"), "seed");
  r.train_size = f.count("train_size");
  r.test_size = f.count("test_size");
  r.t_used = f.count("t_used");
  r.accuracy_before = f.real("accuracy_before");
  r.accuracy_after = f.real("accuracy_after");
  r.pair_count = f.count("pair_count");
  r.threshold_before = f.real("threshold_before");
  r.threshold_after = f.real("threshold_after");
  r.per_class_before = parse_per_class(f.get("per_class_before"), "per_class_before");
  r.per_class_after = parse_per_class(f.get("per_class_after"), "per_class_after");
  return r;
}

std::string render_spectrum(const std::string& name, const SpectrumSummary& s,
                            ReportFormat format) {
  if (format == ReportFormat::Text) return format_spectrum_row(name, s) + "\n";
  nlohmann::ordered_json j;
  j["name"] = name;
  j["n"] = s.n;
  j["dim"] = s.dim;
  j["mean_norm"] = s.mean_norm;
  j["avg_row_norm"] = s.avg_row_norm;
  j["norm_ratio"] = s.norm_ratio;
  j["eigenvalues"] = s.eigenvalues;
  j["cumulative_energy"] = s.cumulative_energy;
  return j.dump(2) + "\n";
}

std::string render_sweep_table(const std::vector<SweepRow>& rows, char delimiter) {
  std::ostringstream out;
  const char d = delimiter;
  out << "t" << d << "accuracy_before" << d << "accuracy_after" << d << "m_empirical_before" << d
      << "m_empirical_after" << d << "train_size" << d << "test_size" << d << "seed\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << r.t_used << d << format_real(r.accuracy_before) << d << format_real(r.accuracy_after)
        << d << format_real(row.m_empirical_before) << d << format_real(row.m_empirical_after)
        << d << r.train_size << d << r.test_size << d << r.seed << "\n";
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& content) {
  write_bytes(path, std::vector<unsigned char>(content.begin(), content.end()));
}

std::string read_text(const std::string& path) {
  const auto bytes = read_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

}  // namespace fpp::io
