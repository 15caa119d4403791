// stable-limits: heavy-tailed deep-network simulation, infinite-width limit
// recursions, stable sampling and fitting. All numerics live in the shared
// library behind the C API (stable_limits.h); this binary only parses flags,
// moves arrays and formats files.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ingest.hpp"
#include "stable_limits.h"

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240229;  // documented fixed default

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

[[noreturn]] void die(int code, const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(code);
}

int exit_code_for(sl_status st) {
  switch (st) {
    case SL_ERR_NUMERIC:
    case SL_ERR_DEGENERATE:
    case SL_ERR_UNKNOWN:
      return kExitNumeric;
    default:
      return kExitUsage;
  }
}

void check(sl_status st, const char* what) {
  if (st != SL_OK) die(exit_code_for(st), std::string(what) + ": " + sl_last_error());
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 2.0))
    die(kExitUsage, "--alpha must lie in (0, 2], got " + std::to_string(alpha));
}

void require_positive(double v, const char* flag) {
  if (!(v > 0.0)) die(kExitUsage, std::string(flag) + " must be positive");
}

std::uint64_t parse_seed(const std::string& s) {
  if (s == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    die(kExitUsage, "--seed expects an unsigned integer or 'random', got '" + s + "'");
  }
}

// "r1c1,r1c2;r2c1,r2c2" -> row-major I x k
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;
};

Matrix parse_matrix(const std::string& text, const char* flag) {
  Matrix m;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::stringstream cells(row);
    std::string cell;
    int cols = 0;
    while (std::getline(cells, cell, ',')) {
      try {
        m.data.push_back(std::stod(cell));
      } catch (const std::exception&) {
        die(kExitUsage, std::string(flag) + ": unparseable entry '" + cell + "'");
      }
      ++cols;
    }
    if (m.rows == 0)
      m.cols = cols;
    else if (cols != m.cols)
      die(kExitUsage, std::string(flag) + ": ragged rows (" + std::to_string(cols) + " vs " +
                          std::to_string(m.cols) + " entries)");
    ++m.rows;
  }
  if (m.rows == 0 || m.cols == 0) die(kExitUsage, std::string(flag) + ": empty matrix");
  return m;
}

std::vector<double> parse_vector(const std::string& text, const char* flag) {
  Matrix m = parse_matrix(text, flag);
  if (m.rows != 1 && m.cols != 1)
    die(kExitUsage, std::string(flag) + ": expected a vector, got a matrix");
  return m.data;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) die(kExitUsage, "cannot open '" + path + "' for writing");
  return out;
}

void write_scalar_csv(const std::string& path, const std::vector<double>& xs) {
  std::ofstream out = open_out(path, false);
  for (double x : xs) out << format_double(x) << '\n';
}

void write_matrix_csv(const std::string& path, const std::vector<double>& xs, int k) {
  std::ofstream out = open_out(path, false);
  for (int c = 1; c <= k; ++c) out << 'x' << c << (c == k ? '\n' : ',');
  const std::size_t rows = xs.size() / static_cast<std::size_t>(k);
  for (std::size_t r = 0; r < rows; ++r) {
    for (int c = 0; c < k; ++c)
      out << format_double(xs[r * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)])
          << (c == k - 1 ? '\n' : ',');
  }
}

void write_bin(const std::string& path, const std::vector<double>& xs) {
  std::ofstream out = open_out(path, true);
  out.write(reinterpret_cast<const char*>(xs.data()),
            static_cast<std::streamsize>(xs.size() * sizeof(double)));
}

void write_samples(const std::string& path, const std::string& format,
                   const std::vector<double>& xs, int k) {
  if (format == "bin")
    write_bin(path, xs);
  else if (k == 1)
    write_scalar_csv(path, xs);
  else
    write_matrix_csv(path, xs, k);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out = open_out(path, false);
  out << text << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) die(kExitUsage, "cannot open '" + path + "' for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cli::IngestResult ingest_or_die(const std::string& path, const std::string& format) {
  try {
    return cli::ingest_array(path, format);
  } catch (const cli::ingest_error& e) {
    die(e.kind() == cli::ingest_errc::parse ? kExitUsage : kExitUsage, e.what());
  }
}

// "min:max:count" per axis, crossed over k axes
std::vector<double> parse_t_grid(const std::string& spec, int k, std::size_t* points) {
  double lo, hi;
  int count;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
    die(kExitUsage, "--t-grid expects 'min:max:count', got '" + spec + "'");
  std::vector<double> axis(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    axis[static_cast<std::size_t>(i)] =
        count == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(count - 1);
  std::size_t total = 1;
  for (int d = 0; d < k; ++d) {
    total *= static_cast<std::size_t>(count);
    if (total > 65536) die(kExitUsage, "--t-grid cross product too large");
  }
  std::vector<double> grid;
  grid.reserve(total * static_cast<std::size_t>(k));
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (int d = 0; d < k; ++d) grid.push_back(axis[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])]);
    for (int d = k - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < count) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  *points = total;
  return grid;
}

// ---- subcommand state ---------------------------------------------------

struct CommonOpts {
  double alpha = 1.5;
  std::string seed = std::to_string(kDefaultSeed);
  std::string stream = "pseudo";
  std::string out;
  std::string format = "csv";
};

int run_sample(const CommonOpts& o, double sigma, std::uint64_t n) {
  require_alpha(o.alpha);
  require_positive(sigma, "--sigma");
  sl_stream* stream = nullptr;
  check(sl_stream_new(o.stream.c_str(), parse_seed(o.seed), 2, &stream), "stream");
  std::vector<double> xs(n);
  check(sl_sample_stable(o.alpha, sigma, stream, xs.size(), xs.data()), "sample");
  sl_stream_free(stream);
  write_samples(o.out, o.format, xs, 1);
  return 0;
}

int run_mvsample(const CommonOpts& o, const std::string& measure_path, std::uint64_t n) {
  require_alpha(o.alpha);
  sl_measure* measure = nullptr;
  check(sl_measure_from_json(read_file(measure_path).c_str(), &measure), "measure");
  const int k = sl_measure_dim(measure);
  const int dim = static_cast<int>(4 * sl_measure_atom_count(measure));
  sl_stream* stream = nullptr;
  check(sl_stream_new(o.stream.c_str(), parse_seed(o.seed), dim, &stream), "stream");
  std::vector<double> xs(n * static_cast<std::size_t>(k));
  check(sl_measure_sample(measure, o.alpha, stream, n, xs.data()), "mvsample");
  sl_stream_free(stream);
  sl_measure_free(measure);
  write_samples(o.out, o.format, xs, k);
  return 0;
}

struct NetOpts {
  double sigma_w = 1.0;
  double sigma_b = 1.0;
  std::string x;
  std::string activation = "tanh";
  int width = 300;
  int depth = 0;  // defaults to --layer
  int layer = 2;
  std::string units = "1";
  std::uint64_t repeats = 1000;
  bool conditional = false;
};

int run_net(const CommonOpts& o, const NetOpts& n) {
  require_alpha(o.alpha);
  require_positive(n.sigma_w, "--sw");
  require_positive(n.sigma_b, "--sb");
  Matrix x = parse_matrix(n.x, "--x");
  const int depth = n.depth > 0 ? n.depth : n.layer;
  sl_net_config cfg{x.rows, depth, n.width, o.alpha, n.sigma_w, n.sigma_b, n.activation.c_str()};
  std::size_t flagged = 0;
  std::vector<double> out;
  if (n.conditional) {
    out.resize(n.repeats * static_cast<std::size_t>(x.cols));
    check(sl_forward_conditional(&cfg, x.data.data(), x.cols, o.stream.c_str(),
                                 parse_seed(o.seed), n.layer, n.repeats, out.data(), &flagged),
          "net");
  } else {
    std::vector<int> units;
    for (double u : parse_vector(n.units, "--units")) units.push_back(static_cast<int>(u));
    out.resize(n.repeats * units.size() * static_cast<std::size_t>(x.cols));
    check(sl_forward_network(&cfg, x.data.data(), x.cols, o.stream.c_str(), parse_seed(o.seed),
                             n.layer, units.data(), units.size(), n.repeats, out.data(),
                             &flagged),
          "net");
  }
  if (flagged > 0)
    std::fprintf(stderr, "note: %zu of %" PRIu64 " repeats contained non-finite values\n",
                 flagged, n.repeats);
  write_samples(o.out, o.format, out, x.cols);
  return 0;
}

int run_recursion(const CommonOpts& o, const std::string& x_spec, const std::string& activation,
                  double sigma_w, double sigma_b, int depth, std::uint64_t mc_samples,
                  const std::string& mode) {
  require_alpha(o.alpha);
  require_positive(sigma_w, "--sw");
  require_positive(sigma_b, "--sb");
  Matrix x = parse_matrix(x_spec, "--x");
  const bool multivariate = mode == "gamma" || (mode == "auto" && x.cols > 1);
  sl_recursion* rec = nullptr;
  if (multivariate) {
    check(sl_gamma_recursion(o.alpha, sigma_w, sigma_b, x.data.data(), x.rows, x.cols,
                             activation.c_str(), depth, mc_samples, o.stream.c_str(),
                             parse_seed(o.seed), &rec),
          "recursion");
  } else {
    if (x.cols != 1) die(kExitUsage, "--mode sigma expects a single-column --x");
    check(sl_sigma_recursion(o.alpha, sigma_w, sigma_b, x.data.data(), x.rows,
                             activation.c_str(), depth, mc_samples, o.stream.c_str(),
                             parse_seed(o.seed), &rec),
          "recursion");
  }
  char* text = nullptr;
  check(sl_recursion_to_json(rec, &text), "recursion");
  write_text(o.out, text);
  sl_string_free(text);
  sl_recursion_free(rec);
  return 0;
}

int run_gausrec(const std::string& out_path, double sw2, double sb2, const std::string& x_spec,
                const std::string& xp_spec, const std::string& activation, int depth,
                int quad_points) {
  require_positive(sw2, "--sw2");
  std::vector<double> x = parse_vector(x_spec, "--x");
  std::vector<double> xp = parse_vector(xp_spec, "--xp");
  if (x.size() != xp.size()) die(kExitUsage, "--x and --xp must have the same dimension");
  std::vector<double> vals(static_cast<std::size_t>(depth) * 4);
  check(sl_gaussian_recursion(sw2, sb2, x.data(), xp.data(), static_cast<int>(x.size()),
                              activation.c_str(), depth, quad_points, vals.data()),
        "gausrec");
  json layers = json::array();
  for (int l = 0; l < depth; ++l) {
    layers.push_back({{"l", l + 1},
                      {"q_x", vals[4 * static_cast<std::size_t>(l) + 0]},
                      {"q_xp", vals[4 * static_cast<std::size_t>(l) + 1]},
                      {"c", vals[4 * static_cast<std::size_t>(l) + 2]},
                      {"rho", vals[4 * static_cast<std::size_t>(l) + 3]}});
  }
  write_text(out_path, json{{"quad_points", quad_points}, {"layers", layers}}.dump(2));
  return 0;
}

struct CompareOpts {
  double sigma_w = 1.0;
  double sigma_b = 1.0;
  std::string x;
  std::string activation = "tanh";
  int width = 300;
  int layer = 2;
  std::uint64_t mc_samples = 1000;
  std::uint64_t n = 100000;
  int units_per_repeat = 100;
  std::string t_grid = "-2:2:5";
};

int run_compare(const CommonOpts& o, const CompareOpts& c) {
  require_alpha(o.alpha);
  Matrix x = parse_matrix(c.x, "--x");
  const int k = x.cols;
  const std::uint64_t seed = parse_seed(o.seed);

  // finite-width side: batches of exchangeable units per network realization
  const std::size_t units_n = static_cast<std::size_t>(c.units_per_repeat);
  const std::size_t repeats = (c.n + units_n - 1) / units_n;
  std::vector<int> units(units_n);
  for (std::size_t u = 0; u < units_n; ++u) units[u] = static_cast<int>(u + 1);
  sl_net_config cfg{x.rows, c.layer, c.width, o.alpha, c.sigma_w, c.sigma_b,
                    c.activation.c_str()};
  std::vector<double> net(repeats * units_n * static_cast<std::size_t>(k));
  std::size_t flagged = 0;
  check(sl_forward_network(&cfg, x.data.data(), k, o.stream.c_str(), seed, c.layer,
                           units.data(), units.size(), repeats, net.data(), &flagged),
        "compare/net");
  net.resize(static_cast<std::size_t>(c.n) * static_cast<std::size_t>(k));

  // limit side: recursion measure at the target layer, then exact draws
  sl_recursion* rec = nullptr;
  check(sl_gamma_recursion(o.alpha, c.sigma_w, c.sigma_b, x.data.data(), x.rows, k,
                           c.activation.c_str(), c.layer, c.mc_samples, o.stream.c_str(),
                           seed + 1, &rec),
        "compare/recursion");
  sl_measure* measure = nullptr;
  check(sl_recursion_measure(rec, c.layer, &measure), "compare/recursion");
  sl_stream* stream = nullptr;
  check(sl_stream_new(o.stream.c_str(), seed + 2,
                      static_cast<int>(4 * sl_measure_atom_count(measure)), &stream),
        "stream");
  std::vector<double> limit(static_cast<std::size_t>(c.n) * static_cast<std::size_t>(k));
  check(sl_measure_sample(measure, o.alpha, stream, c.n, limit.data()), "compare/limit");
  sl_stream_free(stream);

  json marginals = json::array();
  std::vector<double> col_a(c.n), col_b(c.n);
  for (int r = 0; r < k; ++r) {
    for (std::size_t i = 0; i < c.n; ++i) {
      col_a[i] = net[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(r)];
      col_b[i] = limit[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(r)];
    }
    double d = 0.0;
    check(sl_ks_two_sample(col_a.data(), c.n, col_b.data(), c.n, &d), "compare/ks");
    double scale = 0.0;
    check(sl_measure_marginal_scale(measure, o.alpha, r + 1, &scale), "compare/marginal");
    marginals.push_back({{"r", r + 1}, {"ks", d}, {"limit_scale", scale}});
  }

  std::size_t points = 0;
  std::vector<double> grid = parse_t_grid(c.t_grid, k, &points);
  std::vector<double> per_point(points);
  double worst = 0.0;
  check(sl_ecf_distance_measure(net.data(), c.n, k, measure, o.alpha, grid.data(), points,
                                per_point.data(), &worst),
        "compare/ecf");
  json ecf = json::array();
  for (std::size_t p = 0; p < points; ++p) {
    json t = json::array();
    for (int d = 0; d < k; ++d) t.push_back(grid[p * static_cast<std::size_t>(k) + static_cast<std::size_t>(d)]);
    ecf.push_back({{"t", t}, {"abs_error", per_point[p]}});
  }

  json report = {{"alpha", o.alpha},
                 {"layer", c.layer},
                 {"width", c.width},
                 {"n", c.n},
                 {"mc_samples", c.mc_samples},
                 {"seed", seed},
                 {"flagged_repeats", flagged},
                 {"marginals", marginals},
                 {"ecf", ecf},
                 {"ecf_max_abs_error", worst}};
  write_text(o.out, report.dump(2));
  sl_measure_free(measure);
  sl_recursion_free(rec);
  return 0;
}

int run_fit(const std::string& in_path, const std::string& format, const std::string& out_path) {
  cli::IngestResult data = ingest_or_die(in_path, format);
  if (data.non_finite > 0)
    std::fprintf(stderr, "note: dropped %zu non-finite entries\n", data.non_finite);
  sl_fit_report stable{};
  check(sl_fit_stable_mle(data.values.data(), data.values.size(), &stable), "fit/stable");
  double mean = 0.0, sd = 0.0;
  check(sl_fit_gaussian(data.values.data(), data.values.size(), &mean, &sd), "fit/gaussian");
  json report = {{"n", data.values.size()},
                 {"non_finite", data.non_finite},
                 {"stable",
                  {{"alpha", stable.alpha_hat},
                   {"sigma", stable.sigma_hat},
                   {"loglik", stable.log_likelihood},
                   {"iters", stable.iterations},
                   {"converged", stable.converged != 0}}},
                 {"gaussian", {{"mean", mean}, {"std", sd}}}};
  write_text(out_path, report.dump(2));
  return 0;
}

int run_pit(const std::string& in_path, const std::string& format, const std::string& out_path,
            const std::string& dist, double alpha, double sigma, double mean, double sd,
            int bins) {
  cli::IngestResult data = ingest_or_die(in_path, format);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins));
  double chi2 = 0.0, p_value = 0.0;
  if (dist == "stable") {
    require_alpha(alpha);
    require_positive(sigma, "--sigma");
    check(sl_pit_stable(data.values.data(), data.values.size(), alpha, sigma, bins,
                        counts.data(), &chi2, &p_value),
          "pit");
  } else if (dist == "gaussian") {
    require_positive(sd, "--std");
    check(sl_pit_normal(data.values.data(), data.values.size(), mean, sd, bins, counts.data(),
                        &chi2, &p_value),
          "pit");
  } else {
    die(kExitUsage, "--dist must be stable|gaussian");
  }
  std::ofstream out = open_out(out_path, false);
  out << "bin_low,bin_high,count,expected\n";
  const double expected = static_cast<double>(data.values.size()) / bins;
  for (int b = 0; b < bins; ++b) {
    out << format_double(b / static_cast<double>(bins)) << ','
        << format_double((b + 1) / static_cast<double>(bins)) << ','
        << counts[static_cast<std::size_t>(b)] << ',' << format_double(expected) << '\n';
  }
  std::printf("chi_square=%s p_value=%s bins=%d n=%zu\n", format_double(chi2).c_str(),
              format_double(p_value).c_str(), bins, data.values.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable-limits: deep networks with heavy-tailed initialization, their "
               "infinite-width limit laws, and stable-distribution fitting"};
  app.require_subcommand(1);
  app.footer("Seeds default to the fixed constant 20240229; pass --seed random for entropy.\n"
             "STABLE_LIMITS_THREADS caps worker threads (0 = auto).");

  CommonOpts common;
  double sigma = 1.0;
  std::uint64_t count = 100000;
  std::string measure_path;
  NetOpts net;
  std::string activation = "tanh";
  double sigma_w = 1.0, sigma_b = 1.0;
  int depth = 10;
  std::uint64_t mc_samples = 1000;
  std::string mode = "auto";
  std::string x_spec, xp_spec;
  double sw2 = 1.0, sb2 = 1.0;
  int quad_points = 64;
  CompareOpts cmp;
  std::string in_path, in_format = "csv", dist = "stable";
  double pit_mean = 0.0, pit_sd = 1.0;
  int bins = 50;

  auto add_common = [&](CLI::App* sub, bool with_format = true) {
    sub->add_option("--seed", common.seed, "64-bit seed or 'random'");
    sub->add_option("--stream", common.stream, "pseudo | ld (low-discrepancy)")
        ->check(CLI::IsMember({"pseudo", "ld"}));
    sub->add_option("--out", common.out, "output file")->required();
    if (with_format)
      sub->add_option("--format", common.format, "csv | bin")
          ->check(CLI::IsMember({"csv", "bin"}));
  };

  CLI::App* sample = app.add_subcommand("sample", "draw scalar stable variates");
  sample->add_option("--alpha", common.alpha, "stability index in (0, 2]")->required();
  sample->add_option("--sigma", sigma, "scale > 0");
  sample->add_option("--n", count, "number of draws")->required();
  add_common(sample);

  CLI::App* mvsample = app.add_subcommand("mvsample", "draw from a spectral-measure JSON");
  mvsample->add_option("--alpha", common.alpha, "stability index in (0, 2]")->required();
  mvsample->add_option("--measure", measure_path, "measure JSON file")->required();
  mvsample->add_option("--n", count, "number of draws")->required();
  add_common(mvsample);

  CLI::App* netcmd = app.add_subcommand("net", "simulate finite-width network outputs");
  netcmd->add_option("--alpha", common.alpha, "stability index in (0, 2]")->required();
  netcmd->add_option("--sw", net.sigma_w, "weight scale");
  netcmd->add_option("--sb", net.sigma_b, "bias scale");
  netcmd->add_option("--x", net.x, "I x k input matrix: rows ';', entries ','")->required();
  netcmd->add_option("--activation", net.activation, "tanh | relu | identity");
  netcmd->add_option("--width", net.width, "layer width n");
  netcmd->add_option("--layer", net.layer, "target layer l >= 1")->required();
  netcmd->add_option("--depth", net.depth, "network depth (default: --layer)");
  netcmd->add_option("--units", net.units, "comma list of unit indices");
  netcmd->add_option("--repeats", net.repeats, "independent network draws");
  netcmd->add_flag("--conditional", net.conditional,
                   "draw the target unit from its exact conditional law");
  add_common(netcmd);

  CLI::App* reccmd = app.add_subcommand("recursion", "evaluate the limit recursion");
  reccmd->add_option("--alpha", common.alpha, "stability index in (0, 2]")->required();
  reccmd->add_option("--sw", sigma_w, "weight scale");
  reccmd->add_option("--sb", sigma_b, "bias scale");
  reccmd->add_option("--x", x_spec, "I x k input matrix: rows ';', entries ','")->required();
  reccmd->add_option("--activation", activation, "tanh only among built-ins");
  reccmd->add_option("--depth", depth, "layers to compute");
  reccmd->add_option("--M", mc_samples, "Monte-Carlo samples per layer");
  reccmd->add_option("--mode", mode, "auto | sigma | gamma")
      ->check(CLI::IsMember({"auto", "sigma", "gamma"}));
  add_common(reccmd, false);

  CLI::App* gausrec = app.add_subcommand("gausrec", "Gaussian-init variance recursion");
  gausrec->add_option("--sw2", sw2, "weight variance")->required();
  gausrec->add_option("--sb2", sb2, "bias variance")->required();
  gausrec->add_option("--x", x_spec, "first input vector")->required();
  gausrec->add_option("--xp", xp_spec, "second input vector")->required();
  gausrec->add_option("--activation", activation, "activation id");
  gausrec->add_option("--depth", depth, "layers to compute");
  gausrec->add_option("--quad", quad_points, "Gauss-Hermite points per axis (16..192)");
  gausrec->add_option("--out", common.out, "output JSON file")->required();

  CLI::App* compare = app.add_subcommand(
      "compare", "finite-width samples vs the limit law: per-marginal KS + ECF report");
  compare->add_option("--alpha", common.alpha, "stability index in (0, 2]")->required();
  compare->add_option("--sw", cmp.sigma_w, "weight scale");
  compare->add_option("--sb", cmp.sigma_b, "bias scale");
  compare->add_option("--x", cmp.x, "I x k input matrix")->required();
  compare->add_option("--activation", cmp.activation, "activation id");
  compare->add_option("--width", cmp.width, "layer width n");
  compare->add_option("--layer", cmp.layer, "target layer");
  compare->add_option("--M", cmp.mc_samples, "recursion Monte-Carlo samples per layer");
  compare->add_option("--N", cmp.n, "samples per side");
  compare->add_option("--units-per-repeat", cmp.units_per_repeat,
                      "exchangeable units harvested per network realization");
  compare->add_option("--t-grid", cmp.t_grid, "ECF grid 'min:max:count' per axis");
  add_common(compare, false);

  CLI::App* fit = app.add_subcommand("fit", "stable MLE + Gaussian fit of an array");
  fit->add_option("--in", in_path, "input array file")->required();
  fit->add_option("--format", in_format, "csv | bin")->check(CLI::IsMember({"csv", "bin"}));
  fit->add_option("--out", common.out, "output JSON file")->required();

  CLI::App* pit = app.add_subcommand("pit", "probability integral transform histogram");
  pit->add_option("--in", in_path, "input array file")->required();
  pit->add_option("--format", in_format, "csv | bin")->check(CLI::IsMember({"csv", "bin"}));
  pit->add_option("--dist", dist, "stable | gaussian");
  pit->add_option("--alpha", common.alpha, "stable stability index");
  pit->add_option("--sigma", sigma, "stable scale");
  pit->add_option("--mean", pit_mean, "gaussian mean");
  pit->add_option("--std", pit_sd, "gaussian standard deviation");
  pit->add_option("--bins", bins, "histogram bins");
  pit->add_option("--out", common.out, "output CSV file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) return run_sample(common, sigma, count);
    if (mvsample->parsed()) return run_mvsample(common, measure_path, count);
    if (netcmd->parsed()) return run_net(common, net);
    if (reccmd->parsed())
      return run_recursion(common, x_spec, activation, sigma_w, sigma_b, depth, mc_samples,
                           mode);
    if (gausrec->parsed())
      return run_gausrec(common.out, sw2, sb2, x_spec, xp_spec, activation, depth, quad_points);
    if (compare->parsed()) return run_compare(common, cmp);
    if (fit->parsed()) return run_fit(in_path, in_format, common.out);
    if (pit->parsed())
      return run_pit(in_path, in_format, common.out, dist, common.alpha, sigma, pit_mean,
                     pit_sd, bins);
  } catch (const std::exception& e) {
    die(kExitNumeric, e.what());
  }
  return kExitUsage;
}
