#include "app.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "segre/aggregate.hpp"
#include "segre/frechet.hpp"
#include "segre/segre.hpp"

namespace segre::cli {
namespace {

using io::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kRoundTripTolerance = 1e-9;

struct Options {
  std::string input;
  std::string output;
  std::string alpha;
  std::string truth;
  bool check = false;
  std::optional<std::uint64_t> seed;
  std::vector<double> alphas = {0.01, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 1.99};
  int samples = 201;
};

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json read_document(const std::string& path, std::istream& in) {
  std::string text;
  if (path.empty() || path == "-") {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
  }
  json doc = json::parse(text);
  io::check_schema(doc);
  return doc;
}

void write_document(const std::string& path, std::ostream& out, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  file << text;
}

std::optional<double> parse_alpha(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw InputError("--alpha expects a number, got '" + text + "'");
  return value;
}

int report_check(double gap, const char* what, std::ostream& err) {
  if (gap <= kRoundTripTolerance) return kOk;
  err << "check failed: " << what << " round trip differs by " << format_number(gap)
      << " (tolerance " << kRoundTripTolerance << ")\n";
  return kCheckFailed;
}

int cmd_dist(const Options& o, std::istream& in, std::ostream& out) {
  const json doc = read_document(o.input, in);
  const ManifoldShape shape = io::shape_from_json(doc.at("shape"), parse_alpha(o.alpha));
  const SegrePoint p = io::point_from_json(shape, doc.at("p"));
  const SegrePoint q = io::point_from_json(shape, doc.at("q"));
  const Distance d = segre_distance(p, q);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16g", d.value);
  std::ostringstream line;
  line << buf << (d.connected ? " connected" : " disconnected") << "\n";
  if (o.output.empty() || o.output == "-") {
    out << line.str();
  } else {
    std::ofstream file(o.output, std::ios::binary);
    if (!file) throw InputError("cannot write " + o.output);
    file << line.str();
  }
  return kOk;
}

int cmd_log(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const json doc = read_document(o.input, in);
  const ManifoldShape shape = io::shape_from_json(doc.at("shape"), parse_alpha(o.alpha));
  const SegrePoint p = io::point_from_json(shape, doc.at("p"));
  const SegrePoint q = io::point_from_json(shape, doc.at("q"));
  const SegreTangent v = segre_log(p, q);
  write_document(o.output, out,
                 io::with_schema({{"shape", io::shape_to_json(shape)},
                                  {"point", io::point_to_json(p)},
                                  {"tangent", io::tangent_to_json(v.coords())}}));
  if (!o.check) return kOk;
  return report_check(segre_exp(p, v).tensor().max_abs_diff(q.tensor()), "exp(log)", err);
}

int cmd_exp(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const json doc = read_document(o.input, in);
  const ManifoldShape shape = io::shape_from_json(doc.at("shape"), parse_alpha(o.alpha));
  const PreSegrePoint base = io::pre_point_from_json(shape, doc.at("point"));
  const PreSegreTangent coords = io::tangent_from_json(base, doc.at("tangent"));
  const SegrePoint p(base);
  const SegreTangent v = SegreTangent::lift(p, coords);
  const SegrePoint r = segre_exp(p, v);
  write_document(o.output, out,
                 io::with_schema({{"shape", io::shape_to_json(shape)},
                                  {"point", io::point_to_json(r)}}));
  if (!o.check) return kOk;
  const SegreTangent back = segre_log(p, r);
  return report_check(segre_exp(p, back).tensor().max_abs_diff(r.tensor()), "exp(log)", err);
}

int cmd_mean(const Options& o, std::istream& in, std::ostream& out) {
  const json doc = read_document(o.input, in);
  const ManifoldShape shape = io::shape_from_json(doc.at("shape"), parse_alpha(o.alpha));
  std::vector<SegrePoint> points;
  for (const auto& j : doc.at("points")) points.push_back(io::point_from_json(shape, j));
  if (points.empty()) throw InputError("\"points\" must not be empty");
  MeanConfig cfg;
  cfg.shuffle_seed = o.seed;
  const MeanReport report = refine_mean_report(points, inductive_mean(points, cfg), cfg);
  if (!report.converged) {
    throw MaxItersExceeded(report.mean, report.grad_norm, report.iterations);
  }
  write_document(o.output, out,
                 io::with_schema({{"shape", io::shape_to_json(shape)},
                                  {"point", io::point_to_json(report.mean)},
                                  {"iterations", report.iterations},
                                  {"grad_norm", report.grad_norm}}));
  return kOk;
}

int cmd_aggregate(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const json doc = read_document(o.input, in);
  const json& shape_doc = doc.at("shape");
  const std::vector<int> mults = shape_doc.contains("mults")
                                     ? shape_doc.at("mults").get<std::vector<int>>()
                                     : std::vector<int>(shape_doc.at("dims").size(), 1);
  std::optional<double> alpha;
  if (o.alpha == "auto") {
    alpha = auto_alpha(mults);
  } else if (!o.alpha.empty()) {
    alpha = parse_alpha(o.alpha);
  } else if (!shape_doc.contains("alpha") || shape_doc.at("alpha").is_null()) {
    alpha = auto_alpha(mults);
  }
  const ManifoldShape shape = io::shape_from_json(shape_doc, alpha);
  if (connectedness_class(shape) != Connectedness::Connected) {
    err << "warning: alpha = " << format_number(shape.alpha()) << " is "
        << to_string(connectedness_class(shape))
        << " for this shape; some pairs of terms may have no connecting geodesic\n";
  }

  std::vector<Decomposition> decomps;
  for (const auto& d : doc.at("decompositions")) {
    decomps.push_back(io::decomposition_from_json(shape, d));
  }
  if (decomps.empty()) throw InputError("\"decompositions\" must not be empty");
  MeanConfig cfg;
  cfg.shuffle_seed = o.seed;
  const AggregateResult result = aggregate(decomps, cfg);

  json report = io::with_schema({{"shape", io::shape_to_json(shape)},
                                 {"terms", io::decomposition_to_json(result.terms)},
                                 {"spreads", result.spreads},
                                 {"assignments", result.assignments}});
  if (!o.truth.empty()) {
    std::istringstream unused;
    const json truth_doc = read_document(o.truth, unused);
    const Decomposition truth = io::decomposition_from_json(shape, truth_doc.at("terms"));
    const auto matched = match_terms(result.terms, truth);
    std::vector<double> distances;
    for (std::size_t r = 0; r < result.terms.size(); ++r) {
      distances.push_back(segre_distance(result.terms[r], truth[matched[r]]).value);
    }
    report["truth_distances"] = distances;
    report["relative_error"] =
        relative_frobenius_error(sum_tensor(result.terms), sum_tensor(truth));
  }
  write_document(o.output, out, report);
  return kOk;
}

int cmd_geodesic_demo(const Options& o, std::ostream& out) {
  if (o.samples < 2) throw InputError("--samples must be at least 2");
  const std::filesystem::path dir = o.output.empty() ? "." : o.output;
  std::filesystem::create_directories(dir);
  for (double alpha : o.alphas) {
    if (!(alpha > 0.0)) throw InputError("every alpha must be positive");
    if (alpha >= 2.0) {
      throw IncompatibleError(alpha * std::numbers::pi / 2.0);
    }
    const ManifoldShape shape({2}, {1}, alpha);
    const PreSegrePoint p(shape, 1.0, {UnitVector::basis(2, 1)});
    const PreSegrePoint q(shape, 1.0, {UnitVector::basis(2, 0)});
    const PreSegreTangent v = pre_log(p, q);

    char name[64];
    std::snprintf(name, sizeof name, "geodesic_alpha_%g.csv", alpha);
    const std::filesystem::path path = dir / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot write " + path.string());
    file << "t,x,y\n";
    for (int s = 0; s < o.samples; ++s) {
      const double t = static_cast<double>(s) / (o.samples - 1);
      const PreSegrePoint x = geodesic_sample(p, v, t);
      const Vector xy = x.lambda() * x.factor(0).coords();
      file << format_number(t) << ',' << format_number(xy[0]) << ',' << format_number(xy[1])
           << '\n';
    }
    out << path.string() << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Geometry and averaging of rank-1 tensors in the alpha-warped metric"};
  app.require_subcommand(1);
  Options o;

  auto add_io = [&o](CLI::App* sub) {
    sub->add_option("input", o.input, "Input JSON document (stdin when omitted)");
    sub->add_option("--out,-o", o.output, "Output file (stdout when omitted)");
  };
  auto add_alpha = [&o](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "Warping factor overriding the file's shape.alpha");
  };

  CLI::App* exp = app.add_subcommand("exp", "Exponential map: point + tangent -> point");
  add_io(exp);
  add_alpha(exp);
  exp->add_flag("--check", o.check, "Verify exp(log) reproduces the result");

  CLI::App* log = app.add_subcommand("log", "Logarithm: points p, q -> tangent at p");
  add_io(log);
  add_alpha(log);
  log->add_flag("--check", o.check, "Verify exp(p, log(p, q)) reproduces q");

  CLI::App* dist = app.add_subcommand("dist", "Geodesic distance between points p and q");
  add_io(dist);
  add_alpha(dist);

  CLI::App* mean = app.add_subcommand("mean", "Frechet mean of a list of points");
  add_io(mean);
  add_alpha(mean);
  mean->add_option("--seed", o.seed, "Shuffle the interpolation order with this seed");

  CLI::App* agg = app.add_subcommand("aggregate", "Consensus of several rank-r decompositions");
  add_io(agg);
  agg->add_option("--alpha", o.alpha, "Warping factor, or 'auto' for 1/sqrt(sum k) - sqrt(eps)");
  agg->add_option("--truth", o.truth, "Ground-truth decomposition to score against");
  agg->add_option("--seed", o.seed, "Shuffle the interpolation order with this seed");

  CLI::App* demo = app.add_subcommand("geodesic-demo",
                                      "Write CSV traces of geodesics from (0,1) to (1,0)");
  demo->add_option("--alphas", o.alphas, "Warping factors, each in (0, 2)")->delimiter(',');
  demo->add_option("--samples", o.samples, "Samples per trace (odd keeps t = 0.5)");
  demo->add_option("--out,-o", o.output, "Output directory (default: current directory)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (exp->parsed()) return cmd_exp(o, in, out, err);
    if (log->parsed()) return cmd_log(o, in, out, err);
    if (dist->parsed()) return cmd_dist(o, in, out);
    if (mean->parsed()) return cmd_mean(o, in, out);
    if (agg->parsed()) return cmd_aggregate(o, in, out, err);
    return cmd_geodesic_demo(o, out);
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << "\n";
    return kGeometryError;
  } catch (const NonConvergence& e) {
    err << "did not converge: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInputError;
  } catch (const std::logic_error& e) {
    // ShapeMismatch, SizeCapExceeded and friends.
    err << "invalid input: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace segre::cli
