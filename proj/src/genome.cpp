#include "legevo/genome.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "legevo/util.hpp"

namespace legevo {

namespace {

constexpr const char* kFormatTag = "legevo-genome";
constexpr int kFormatVersion = 1;

std::string spline_field(size_t spline_index, const char* field) {
  return "spline " + std::to_string(spline_index) + ": " + field;
}

}  // namespace

std::optional<std::string> invariant_violation(const LegGenome& genome) {
  const int n_splines = static_cast<int>(genome.splines.size());
  if (n_splines < bounds::kMinSplines || n_splines > bounds::kMaxSplines) {
    return "spline count out of range (got " + std::to_string(n_splines) + ")";
  }
  for (size_t i = 0; i < genome.splines.size(); ++i) {
    const BezierSpline& s = genome.splines[i];
    const int n_points = static_cast<int>(s.control_points.size());
    if (n_points < bounds::kMinControlPoints || n_points > bounds::kMaxControlPoints) {
      return spline_field(i, "control point count out of range (got ") +
             std::to_string(n_points) + ")";
    }
    if (s.thickness < bounds::kMinThickness || s.thickness > bounds::kMaxThickness) {
      return spline_field(i, "thickness out of range (got ") + std::to_string(s.thickness) + ")";
    }
    for (const ControlPoint& p : s.control_points) {
      if (!(p.x >= 0.0 && p.x <= bounds::kMaxX)) return spline_field(i, "x out of range");
      if (!(p.y >= 0.0 && p.y <= bounds::kMaxY)) return spline_field(i, "y out of range");
      if (!(p.z >= 0.0 && p.z <= bounds::kMaxZ)) return spline_field(i, "z out of range");
    }
  }
  return std::nullopt;
}

Vec3 evaluate_bezier(const BezierSpline& spline, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("bezier parameter t outside [0,1]: " + format_double(t));
  }
  std::vector<Vec3> pts = spline.control_points;
  for (size_t level = pts.size(); level > 1; --level) {
    for (size_t i = 0; i + 1 < level; ++i) {
      pts[i] = pts[i] * (1.0 - t) + pts[i + 1] * t;
    }
  }
  return pts.empty() ? Vec3{} : pts[0];
}

LegGenome random_genome(Rng& rng, std::uint64_t id) {
  std::uniform_int_distribution<int> spline_count(bounds::kMinSplines, bounds::kMaxSplines);
  std::uniform_int_distribution<int> point_count(bounds::kMinControlPoints,
                                                 bounds::kMaxControlPoints);
  std::uniform_int_distribution<int> thickness(bounds::kMinThickness, bounds::kMaxThickness);
  std::uniform_real_distribution<double> ux(0.0, bounds::kMaxX);
  std::uniform_real_distribution<double> uy(0.0, bounds::kMaxY);
  std::uniform_real_distribution<double> uz(0.0, bounds::kMaxZ);

  LegGenome genome;
  genome.id = id;
  const int n_splines = spline_count(rng);
  genome.splines.reserve(n_splines);
  for (int s = 0; s < n_splines; ++s) {
    BezierSpline spline;
    const int n_points = point_count(rng);
    spline.thickness = thickness(rng);
    spline.control_points.reserve(n_points);
    for (int p = 0; p < n_points; ++p) {
      spline.control_points.push_back({ux(rng), uy(rng), uz(rng)});
    }
    genome.splines.push_back(std::move(spline));
  }
  return genome;
}

std::string serialize(const LegGenome& genome) {
  std::string out;
  out += kFormatTag;
  out += ' ';
  out += std::to_string(kFormatVersion);
  out += '\n';
  out += "id " + std::to_string(genome.id) + '\n';
  if (!genome.lineage.empty()) {
    out += "lineage";
    for (std::uint64_t parent : genome.lineage) out += ' ' + std::to_string(parent);
    out += '\n';
  }
  out += "splines " + std::to_string(genome.splines.size()) + '\n';
  for (const BezierSpline& s : genome.splines) {
    out += "spline thickness " + std::to_string(s.thickness) + " points " +
           std::to_string(s.control_points.size()) + '\n';
    for (const ControlPoint& p : s.control_points) {
      out += format_double(p.x) + ' ' + format_double(p.y) + ' ' + format_double(p.z) + '\n';
    }
  }
  return out;
}

namespace {

struct LineReader {
  std::istringstream in;
  int line_no = 0;

  explicit LineReader(const std::string& text) : in(text) {}

  // Next non-empty line, trimmed; throws on EOF.
  std::string next(const char* what) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      line = trim(line);
      if (!line.empty()) return line;
    }
    throw ParseError(std::string("unexpected end of record while reading ") + what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg);
  }
};

std::uint64_t parse_u64(LineReader& r, std::string_view token, const char* field) {
  std::uint64_t value = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    r.fail(std::string("malformed ") + field + " '" + std::string(token) + "'");
  }
  return value;
}

double parse_real(LineReader& r, std::string_view token, const char* field) {
  double value = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    r.fail(std::string("malformed ") + field + " '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace

LegGenome deserialize(const std::string& text) {
  LineReader r(text);

  auto header = split_ws(r.next("header"));
  if (header.size() != 2 || header[0] != kFormatTag) {
    r.fail("expected '" + std::string(kFormatTag) + " <version>' header");
  }
  if (parse_u64(r, header[1], "format version") != kFormatVersion) {
    r.fail("unsupported format version '" + header[1] + "'");
  }

  LegGenome genome;
  auto id_line = split_ws(r.next("id"));
  if (id_line.size() != 2 || id_line[0] != "id") r.fail("expected 'id <n>'");
  genome.id = parse_u64(r, id_line[1], "id");

  auto line = split_ws(r.next("splines"));
  if (!line.empty() && line[0] == "lineage") {
    for (size_t i = 1; i < line.size(); ++i) {
      genome.lineage.push_back(parse_u64(r, line[i], "lineage id"));
    }
    line = split_ws(r.next("splines"));
  }
  if (line.size() != 2 || line[0] != "splines") r.fail("expected 'splines <count>'");
  const std::uint64_t n_splines = parse_u64(r, line[1], "spline count");
  if (n_splines < bounds::kMinSplines || n_splines > bounds::kMaxSplines) {
    r.fail("spline count out of range (got " + std::string(line[1]) + ")");
  }

  for (std::uint64_t s = 0; s < n_splines; ++s) {
    auto head = split_ws(r.next("spline header"));
    if (head.size() != 5 || head[0] != "spline" || head[1] != "thickness" || head[3] != "points") {
      r.fail("expected 'spline thickness <t> points <n>'");
    }
    BezierSpline spline;
    const std::uint64_t thickness = parse_u64(r, head[2], "thickness");
    if (thickness < bounds::kMinThickness || thickness > bounds::kMaxThickness) {
      r.fail("thickness out of range (got " + head[2] + ")");
    }
    spline.thickness = static_cast<int>(thickness);
    const std::uint64_t n_points = parse_u64(r, head[4], "control point count");
    if (n_points < bounds::kMinControlPoints || n_points > bounds::kMaxControlPoints) {
      r.fail("control point count out of range (got " + head[4] + ")");
    }
    for (std::uint64_t p = 0; p < n_points; ++p) {
      auto coords = split_ws(r.next("control point"));
      if (coords.size() != 3) r.fail("expected 3 coordinates on control point line");
      ControlPoint point{parse_real(r, coords[0], "x"), parse_real(r, coords[1], "y"),
                         parse_real(r, coords[2], "z")};
      if (!(point.x >= 0.0 && point.x <= bounds::kMaxX)) r.fail("x out of range");
      if (!(point.y >= 0.0 && point.y <= bounds::kMaxY)) r.fail("y out of range");
      if (!(point.z >= 0.0 && point.z <= bounds::kMaxZ)) r.fail("z out of range");
      spline.control_points.push_back(point);
    }
    genome.splines.push_back(std::move(spline));
  }

  if (auto violation = invariant_violation(genome)) r.fail(*violation);
  return genome;
}

void write_genome_file(const LegGenome& genome, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out << serialize(genome);
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

LegGenome read_genome_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for read: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace legevo
