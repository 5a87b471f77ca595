#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fpp/error.hpp"
#include "fpp/eval.hpp"
#include "fpp/io.hpp"
#include "fpp/isotropy.hpp"
#include "fpp/postprocess.hpp"
#include "fpp/synth.hpp"

namespace fpp::cli {

namespace {

struct CommandConfig {
  std::string input;
  std::string output;
  std::string labels;
  std::string model;
  std::size_t t = 1;
  std::size_t pca_dim = 0;
  std::uint64_t seed = 0;
  double test_fraction = 0.3;
  std::string evaluator = "nearest_centroid";
  std::size_t k = 1;
  std::string metric = "euclidean";
  std::string fit_on = "train";
  std::string l2 = "none";
  std::size_t t_max = 10;
  std::string format = "text";
  std::size_t top = 10;
  std::string name;

  // synth
  std::size_t n_per_class = 500;
  std::size_t classes = 4;
  std::size_t dim = 32;
  double offset_norm = 5.0;
  std::vector<double> spikes{50.0, 20.0};
  double base_variance = 1.0;
  double class_sep = 6.0;

  // import
  bool header = false;
  std::string label_column;
};

const std::vector<std::string> kFormats{"text", "machine"};
const std::vector<std::string> kEvaluators{"nearest_centroid", "knn", "pair_verify"};
const std::vector<std::string> kMetrics{"euclidean", "cosine"};
const std::vector<std::string> kFitOn{"train", "all"};
const std::vector<std::string> kL2{"none", "before", "after"};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text(path, text);
  }
}

void add_input(CLI::App* cmd, CommandConfig& c, const char* what) {
  cmd->add_option("--input", c.input, what)->required();
}

void add_format(CLI::App* cmd, CommandConfig& c) {
  cmd->add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
}

void add_eval_options(CLI::App* cmd, CommandConfig& c, bool with_evaluator) {
  add_input(cmd, c, "Feature file (FPF1)");
  cmd->add_option("--labels", c.labels, "Label file (FPL1)")->required();
  cmd->add_option("--pca-dim", c.pca_dim, "Components PCA may extract (0 = feature dimension)")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Split and pair-sampling seed")->capture_default_str();
  cmd->add_option("--test-fraction", c.test_fraction, "Fraction of each class held out")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  if (with_evaluator) {
    cmd->add_option("--evaluator", c.evaluator, "Downstream evaluator")
        ->check(CLI::IsMember(kEvaluators))
        ->capture_default_str();
  }
  cmd->add_option("--k", c.k, "Neighbours for knn")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--metric", c.metric, "Distance for knn")
      ->check(CLI::IsMember(kMetrics))
      ->capture_default_str();
  cmd->add_option("--fit-on", c.fit_on, "Rows the model is fitted on")
      ->check(CLI::IsMember(kFitOn))
      ->capture_default_str();
  cmd->add_option("--l2", c.l2, "L2-normalize rows before or after postprocessing")
      ->check(CLI::IsMember(kL2))
      ->capture_default_str();
  cmd->add_option("--output", c.output, "Report path (default: standard output)");
}

EvalParams eval_params(const CommandConfig& c, Evaluator evaluator) {
  EvalParams p;
  p.evaluator = evaluator;
  p.k = c.k;
  p.metric = parse_metric(c.metric);
  p.test_fraction = c.test_fraction;
  p.pca_dim = c.pca_dim;
  p.fit_on = parse_fit_on(c.fit_on);
  p.l2 = parse_l2_mode(c.l2);
  return p;
}

int cmd_synth(const CommandConfig& c) {
  SynthSpec spec;
  spec.n_per_class = c.n_per_class;
  spec.n_classes = c.classes;
  spec.dim = c.dim;
  spec.offset_norm = c.offset_norm;
  spec.spike_variances = c.spikes;
  spec.base_variance = c.base_variance;
  spec.class_sep = c.class_sep;
  spec.seed = c.seed;
  const SynthData data = generate(spec);
  io::write_features(c.output, data.features);
  io::write_labels(c.labels, data.labels);
  return kExitOk;
}

int cmd_fit(const CommandConfig& c, std::ostream& out) {
  const Matrix features = io::read_features(c.input);
  const PostprocessModel model = fit(features, c.t, c.pca_dim);
  const auto summary = spectrum_summary(features, std::min(c.top, features.cols()));
  io::write_model(c.model, model);
  const std::string name = c.name.empty() ? std::filesystem::path(c.input).stem().string() : c.name;
  emit(c.output, io::render_spectrum(name, summary, io::parse_report_format(c.format)), out);
  return kExitOk;
}

int cmd_transform(const CommandConfig& c) {
  const PostprocessModel model = io::read_model(c.model);
  const Matrix features = io::read_features(c.input);
  io::write_features(c.output, transform(features, model));
  return kExitOk;
}

int cmd_spectrum(const CommandConfig& c, std::ostream& out) {
  const Matrix features = io::read_features(c.input);
  const auto summary = spectrum_summary(features, std::min(c.top, features.cols()));
  const std::string name = c.name.empty() ? std::filesystem::path(c.input).stem().string() : c.name;
  emit(c.output, io::render_spectrum(name, summary, io::parse_report_format(c.format)), out);
  return kExitOk;
}

int cmd_isotropy(const CommandConfig& c, std::ostream& out) {
  const Matrix features = io::read_features(c.input);
  emit(c.output, io::render_report(isotropy_report(features), io::parse_report_format(c.format)),
       out);
  return kExitOk;
}

int cmd_eval(const CommandConfig& c, Evaluator evaluator, std::ostream& out) {
  const Matrix features = io::read_features(c.input);
  const auto labels = io::read_labels(c.labels);
  const EvalReport report = compare(features, labels, c.t, eval_params(c, evaluator), c.seed);
  emit(c.output, io::render_report(report, io::parse_report_format(c.format)), out);
  return kExitOk;
}

int cmd_sweep(const CommandConfig& c, std::ostream& out) {
  const Matrix features = io::read_features(c.input);
  const auto labels = io::read_labels(c.labels);
  const auto rows = sweep(features, labels, c.t_max,
                          eval_params(c, parse_evaluator(c.evaluator)), c.seed);
  emit(c.output, io::render_sweep_table(rows), out);
  return kExitOk;
}

int cmd_import(const CommandConfig& c) {
  const std::optional<std::string> label_column =
      c.label_column.empty() ? std::nullopt : std::optional<std::string>(c.label_column);
  const io::CsvData data = io::read_csv(c.input, c.header, label_column);
  if (label_column && c.labels.empty()) {
    fail(ErrorKind::InvalidArgument, "--label-column requires --labels");
  }
  io::write_features(c.output, data.features);
  if (data.labels) io::write_labels(c.labels, *data.labels);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CommandConfig c;
  CLI::App app{"Feature postprocessing: mean removal and dominating-direction projection", "fpp"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate a labeled spiked-covariance feature set");
  synth->add_option("--output", c.output, "Feature file to write")->required();
  synth->add_option("--labels", c.labels, "Label file to write")->required();
  synth->add_option("--n-per-class", c.n_per_class, "Rows per class")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--classes", c.classes, "Number of classes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--dim", c.dim, "Feature dimension")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--offset-norm", c.offset_norm, "Norm of the common offset vector")
      ->capture_default_str();
  synth->add_option("--spikes", c.spikes, "Comma-separated spike variances")
      ->delimiter(',')
      ->capture_default_str();
  synth->add_option("--base-variance", c.base_variance, "Noise variance off the spikes")
      ->capture_default_str();
  synth->add_option("--class-sep", c.class_sep, "Distance between class centroids")
      ->capture_default_str();
  synth->add_option("--seed", c.seed, "Generator seed")->capture_default_str();

  auto* fit_cmd = app.add_subcommand("fit", "Fit a postprocessing model and print a spectrum summary");
  add_input(fit_cmd, c, "Feature file (FPF1)");
  fit_cmd->add_option("--model", c.model, "Model file to write (FPPM)")->required();
  fit_cmd->add_option("--t", c.t, "Dominating directions to remove")->capture_default_str();
  fit_cmd->add_option("--pca-dim", c.pca_dim, "Components PCA may extract (0 = feature dimension)")
      ->capture_default_str();
  fit_cmd->add_option("--top", c.top, "Eigenvalues listed in the summary")->capture_default_str();
  fit_cmd->add_option("--name", c.name, "Row name in the summary (default: input file stem)");
  fit_cmd->add_option("--output", c.output, "Summary path (default: standard output)");
  add_format(fit_cmd, c);

  auto* transform_cmd = app.add_subcommand("transform", "Apply a fitted model to features");
  add_input(transform_cmd, c, "Feature file (FPF1), '-' for standard input");
  transform_cmd->add_option("--model", c.model, "Model file (FPPM)")->required();
  transform_cmd->add_option("--output", c.output, "Feature file to write, '-' for standard output")
      ->required();

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Print a one-line spectrum summary");
  add_input(spectrum_cmd, c, "Feature file (FPF1)");
  spectrum_cmd->add_option("--top", c.top, "Eigenvalues listed")->capture_default_str();
  spectrum_cmd->add_option("--name", c.name, "Row name (default: input file stem)");
  spectrum_cmd->add_option("--output", c.output, "Summary path (default: standard output)");
  add_format(spectrum_cmd, c);

  auto* isotropy_cmd = app.add_subcommand("isotropy", "Report isotropy measures of a feature set");
  add_input(isotropy_cmd, c, "Feature file (FPF1), '-' for standard input");
  isotropy_cmd->add_option("--output", c.output, "Report path (default: standard output)");
  add_format(isotropy_cmd, c);

  auto* eval_cmd = app.add_subcommand("eval", "Classification accuracy before and after postprocessing");
  add_eval_options(eval_cmd, c, true);
  eval_cmd->add_option("--t", c.t, "Dominating directions to remove")->capture_default_str();
  add_format(eval_cmd, c);

  auto* verify_cmd = app.add_subcommand("verify", "Pair verification accuracy before and after postprocessing");
  add_eval_options(verify_cmd, c, false);
  verify_cmd->add_option("--t", c.t, "Dominating directions to remove")->capture_default_str();
  add_format(verify_cmd, c);

  auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy and isotropy for t = 0..t-max");
  add_eval_options(sweep_cmd, c, true);
  sweep_cmd->add_option("--t-max", c.t_max, "Largest t in the sweep")->capture_default_str();

  auto* import_cmd = app.add_subcommand("import", "Convert a numeric CSV into feature/label files");
  add_input(import_cmd, c, "CSV file");
  import_cmd->add_flag("--header", c.header, "First line is a header row");
  import_cmd->add_option("--label-column", c.label_column, "Label column name or zero-based index");
  import_cmd->add_option("--output", c.output, "Feature file to write")->required();
  import_cmd->add_option("--labels", c.labels, "Label file to write");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(c);
    if (fit_cmd->parsed()) return cmd_fit(c, out);
    if (transform_cmd->parsed()) return cmd_transform(c);
    if (spectrum_cmd->parsed()) return cmd_spectrum(c, out);
    if (isotropy_cmd->parsed()) return cmd_isotropy(c, out);
    if (eval_cmd->parsed()) return cmd_eval(c, parse_evaluator(c.evaluator), out);
    if (verify_cmd->parsed()) return cmd_eval(c, Evaluator::PairVerify, out);
    if (sweep_cmd->parsed()) return cmd_sweep(c, out);
    if (import_cmd->parsed()) return cmd_import(c);
  } catch (const fpp::Error& e) {
    err << "fpp: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "fpp: " << e.what() << "\n";
    return kExitUnexpected;
  }
  return kExitUsage;
}

}  // namespace fpp::cli
