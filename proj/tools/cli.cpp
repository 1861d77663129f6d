#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "esvd/analysis.hpp"
#include "esvd/codec.hpp"
#include "esvd/error.hpp"
#include "esvd/experiments.hpp"
#include "esvd/imageio.hpp"
#include "esvd/matrix_io.hpp"
#include "esvd/metrics.hpp"

namespace esvd::cli {
namespace {

enum class Format { Auto, Csv, Binary, Pnm };

const std::map<std::string, Format> kFormats{
    {"auto", Format::Auto}, {"csv", Format::Csv}, {"binary", Format::Binary}, {"pnm", Format::Pnm}};

struct CompressArgs {
  std::string input;
  std::string output;
  std::optional<std::size_t> rank;
  std::optional<std::uint64_t> budget;
  Format format = Format::Auto;
  double ortho_tol = kDefaultOrthoTol;
  double recon_tol = kDefaultReconTol;
  bool header = false;
};

struct DecompressArgs {
  std::string input;
  std::string output;
  Format format = Format::Auto;
};

struct AnalyzeArgs {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> rank;
  std::optional<std::uint64_t> budget;
  bool at_l0 = false;
  bool rank_curve = false;
  std::vector<std::uint64_t> sweep;
};

struct ExperimentArgs {
  std::string name;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::size_t count = 25;
  std::size_t size = 375;
  std::vector<std::size_t> ranks{50, 100, 150, 200, 250, 300};
  std::vector<std::string> images;
  std::size_t repetitions = 50;
  unsigned threads = 0;
  std::optional<std::uint64_t> scatter_budget;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ESVD_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') fail(ErrorCode::Usage, "ESVD_SEED must be an unsigned integer");
    return v;
  }
  return kDefaultSeed;
}

std::string_view as_text(const std::vector<std::uint8_t>& bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

bool is_pnm(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '7';
}

// Stacks planes vertically; flattened metrics do not depend on the layout.
DenseMatrix stack(const std::vector<DenseMatrix>& planes) {
  DenseMatrix out(planes.front().rows() * static_cast<Eigen::Index>(planes.size()),
                  planes.front().cols());
  for (std::size_t c = 0; c < planes.size(); ++c) {
    out.middleRows(static_cast<Eigen::Index>(c) * planes.front().rows(), planes.front().rows()) =
        planes[c];
  }
  return out;
}

int cmd_compress(const CompressArgs& a, std::ostream& out) {
  const std::vector<std::uint8_t> bytes = read_file(a.input);
  Format fmt = a.format;
  if (fmt == Format::Auto) {
    fmt = looks_like_matrix_binary(bytes) ? Format::Binary : is_pnm(bytes) ? Format::Pnm : Format::Csv;
  }

  std::vector<DenseMatrix> planes;
  if (fmt == Format::Pnm) {
    planes = read_pnm(bytes).planes;
  } else if (fmt == Format::Binary) {
    planes.push_back(parse_matrix_binary(bytes));
  } else {
    planes.push_back(parse_matrix_csv(as_text(bytes)));
  }
  const auto m = static_cast<std::uint64_t>(planes.front().rows());
  const auto n = static_cast<std::uint64_t>(planes.front().cols());

  std::size_t l = 0;
  if (a.rank) {
    l = *a.rank;
  } else {
    l = static_cast<std::size_t>(budget_report(*a.budget, m, n).l_esvd_max);
    if (l == 0) fail(ErrorCode::BudgetOutOfRange, "budget too small for a rank-1 E-SVD");
  }
  const StorageReport storage = storage_report(m, n, l);

  CompressOptions options;
  options.ortho_tol = a.ortho_tol;
  options.recon_tol = a.recon_tol;
  options.verify = true;

  std::vector<EsvdCompressed> packed;
  std::vector<DenseMatrix> restored;
  double shift = 0.0;
  for (const auto& plane : planes) {
    CompressResult r = compress_detailed(plane, l, options);
    shift = std::max(shift, r.reorth_shift);
    restored.push_back(decompress(r.data));
    packed.push_back(std::move(r.data));
  }

  if (fmt == Format::Pnm) {
    write_file(a.output, encode_image(packed));
  } else {
    write_file(a.output, encode(packed.front()));
  }

  const DenseMatrix x = stack(planes);
  const DenseMatrix xhat = stack(restored);
  std::string rho = "nan";
  try {
    rho = format_double(pearson(x, xhat));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateVariance) throw;
  }
  if (a.header) {
    out << "m,n,l,channels,stored_numbers,svd_numbers,sr_svd,sr_esvd,sr_hat,mae,rho,reorth_shift\n";
  }
  out << m << ',' << n << ',' << l << ',' << planes.size() << ',' << packed.front().stored_numbers()
      << ',' << storage.n_svd << ',' << format_double(storage.sr_svd) << ','
      << format_double(storage.sr_esvd) << ',' << format_double(storage.sr_hat) << ','
      << format_double(mae(x, xhat)) << ',' << rho << ',' << format_double(shift) << '\n';
  return 0;
}

int cmd_decompress(const DecompressArgs& a) {
  const std::vector<std::uint8_t> bytes = read_file(a.input);
  if (looks_like_esvd_image(bytes)) {
    if (a.format != Format::Auto && a.format != Format::Pnm) {
      fail(ErrorCode::Usage, "image containers decompress to PNM only");
    }
    ImagePlanes img;
    for (const auto& channel : decode_image(bytes)) {
      img.planes.push_back(quantize_plane(decompress(channel)));
    }
    img.height = static_cast<std::size_t>(img.planes.front().rows());
    img.width = static_cast<std::size_t>(img.planes.front().cols());
    write_file(a.output, write_pnm(img));
    return 0;
  }

  const DenseMatrix x = decompress(decode(bytes));
  Format fmt = a.format;
  if (fmt == Format::Auto) {
    const std::string ext = std::filesystem::path(a.output).extension().string();
    fmt = (ext == ".emat" || ext == ".bin") ? Format::Binary : Format::Csv;
  }
  if (fmt == Format::Pnm) fail(ErrorCode::Usage, "matrix containers decompress to csv or binary");
  if (fmt == Format::Binary) {
    write_file(a.output, matrix_to_binary(x));
  } else {
    write_file(a.output, matrix_to_csv(x));
  }
  return 0;
}

void write_storage_row(std::ostream& out, const StorageReport& r) {
  out << r.m << ',' << r.n << ',' << r.l << ',' << r.l0 << ',' << r.n_svd << ',' << r.d_esvd << ','
      << format_double(r.sr_svd) << ',' << format_double(r.sr_esvd) << ','
      << format_double(r.sr_hat) << '\n';
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  if (a.at_l0 || a.rank) {
    const std::uint64_t l = a.rank ? *a.rank : svd_failure_rank(a.m, a.n);
    if (l == 0) fail(ErrorCode::RankOutOfRange, "l0 is zero for this shape");
    out << "m,n,l,l0,n_svd,d_esvd,sr_svd,sr_esvd,sr_hat\n";
    write_storage_row(out, storage_report(a.m, a.n, l));
  } else if (a.budget) {
    const BudgetReport r = budget_report(*a.budget, a.m, a.n);
    out << "M,l_svd_max,l_esvd_max,ratio\n"
        << r.budget << ',' << r.l_svd_max << ',' << r.l_esvd_max << ','
        << (r.ratio ? format_double(*r.ratio) : std::string{}) << '\n';
  } else if (!a.sweep.empty()) {
    write_budget_sweep_csv(out, a.m, a.n, a.sweep[0], a.sweep[1], a.sweep[2]);
  } else if (a.rank_curve) {
    write_rank_curve_csv(out, a.m, a.n);
  } else {
    write_sr_curve_csv(out, a.m, a.n);
  }
  return 0;
}

std::string join_path(const std::string& dir, const char* file) {
  return (std::filesystem::path(dir) / file).string();
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(a.seed);
  std::filesystem::create_directories(a.out_dir);

  if (a.name == "lossless") {
    std::vector<DenseMatrix> sources;
    if (!a.images.empty()) {
      std::vector<ImagePlanes> images;
      for (const auto& path : a.images) images.push_back(read_pnm(read_file(path)));
      sources = image_trial_matrices(images, a.size, seed);
    } else {
      LosslessConfig cfg;
      cfg.count = a.count;
      cfg.size = a.size;
      cfg.seed = seed;
      sources = synthetic_trial_matrices(cfg);
    }
    std::ostringstream csv;
    write_lossless_csv(csv, run_lossless_trial(sources, a.ranks, a.threads));
    const std::string path = join_path(a.out_dir, "lossless_table.csv");
    write_file(path, csv.str());
    out << path << '\n';
    return 0;
  }

  SimulationConfig cfg;
  cfg.repetitions = a.repetitions;
  cfg.seed = seed;
  cfg.threads = a.threads;
  std::ostringstream csv;
  write_simulation_csv(csv, run_simulation(cfg));
  const std::string path = join_path(a.out_dir, "simulation_table.csv");
  write_file(path, csv.str());
  out << path << '\n';
  if (a.scatter_budget) {
    std::ostringstream scatter;
    write_simulation_scatter_csv(scatter, cfg, *a.scatter_budget);
    const std::string spath = join_path(a.out_dir, "simulation_scatter.csv");
    write_file(spath, scatter.str());
    out << spath << '\n';
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"E-SVD: truncated SVD with Givens-angle factors", "esvd"};
  app.require_subcommand(1);

  CompressArgs compress_args;
  auto* compress = app.add_subcommand("compress", "Compress a matrix or PGM/PPM image");
  compress->add_option("input", compress_args.input, "CSV, EMAT binary, or P5/P6 file")->required();
  compress->add_option("-o,--output", compress_args.output, "Output .esvd file")->required();
  auto* rank_opt = compress->add_option("--rank", compress_args.rank, "Retained rank l")
                       ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  auto* budget_opt = compress->add_option("--budget", compress_args.budget, "Storage budget M (units)")
                         ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
  rank_opt->excludes(budget_opt);
  compress->add_option("--format", compress_args.format, "Input format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  compress->add_option("--ortho-tol", compress_args.ortho_tol, "Orthonormality gate");
  compress->add_option("--recon-tol", compress_args.recon_tol, "Factor reconstruction gate");
  compress->add_flag("--header", compress_args.header, "Print the CSV header before the report");

  DecompressArgs decompress_args;
  auto* decompress_cmd = app.add_subcommand("decompress", "Rebuild a matrix or image");
  decompress_cmd->add_option("input", decompress_args.input, ".esvd or .esvd-image file")->required();
  decompress_cmd->add_option("-o,--output", decompress_args.output, "Output file")->required();
  decompress_cmd->add_option("--format", decompress_args.format, "Output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Storage-ratio and budget curves");
  analyze->add_option("m", analyze_args.m, "Rows")->required()->check(CLI::PositiveNumber);
  analyze->add_option("n", analyze_args.n, "Columns")->required()->check(CLI::PositiveNumber);
  auto* a_rank = analyze->add_option("--rank", analyze_args.rank, "Report a single rank");
  auto* a_l0 = analyze->add_flag("--at-l0", analyze_args.at_l0, "Report at l0");
  auto* a_budget = analyze->add_option("--budget", analyze_args.budget, "Maximal ranks for budget M");
  auto* a_sweep = analyze->add_option("--budget-sweep", analyze_args.sweep, "FROM TO STEP")
                      ->expected(3);
  auto* a_curve = analyze->add_flag("--rank-curve", analyze_args.rank_curve,
                                    "l_esvd for every l_svd at equal storage");
  for (auto* opt : {a_rank, a_l0, a_budget, a_sweep, a_curve}) {
    for (auto* other : {a_rank, a_l0, a_budget, a_sweep, a_curve}) {
      if (opt != other) opt->excludes(other);
    }
  }

  ExperimentArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Reproduce the lossless or simulation tables");
  experiment->add_option("name", exp_args.name, "lossless | simulation")
      ->required()
      ->check(CLI::IsMember({"lossless", "simulation"}));
  experiment->add_option("--out-dir", exp_args.out_dir, "Directory for CSV output");
  experiment->add_option("--seed", exp_args.seed, "Seed (falls back to ESVD_SEED)");
  experiment->add_option("--count", exp_args.count, "Synthetic matrices (lossless)");
  experiment->add_option("--size", exp_args.size, "Square size / crop size (lossless)");
  experiment->add_option("--ranks", exp_args.ranks, "Ranks to test (lossless)");
  experiment->add_option("--images", exp_args.images, "PGM/PPM files instead of synthetic data");
  experiment->add_option("--reps", exp_args.repetitions, "Repetitions (simulation)");
  experiment->add_option("--threads", exp_args.threads, "Worker threads, 0 = all cores");
  experiment->add_option("--scatter-budget", exp_args.scatter_budget,
                         "Also write one matrix's scatter at this budget (simulation)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (compress->parsed()) {
      if (!compress_args.rank && !compress_args.budget) {
        fail(ErrorCode::Usage, "compress needs exactly one of --rank or --budget");
      }
      return cmd_compress(compress_args, out);
    }
    if (decompress_cmd->parsed()) return cmd_decompress(decompress_args);
    if (analyze->parsed()) return cmd_analyze(analyze_args, out);
    return cmd_experiment(exp_args, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::Usage ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: Io: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace esvd::cli
