#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pamaj/pa_graph.hpp"

namespace pamaj {

namespace {

std::string format_delta(double delta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", delta);
  return buf;
}

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

void save(const PAGraph& g, std::ostream& out) {
  out << g.t() << ' ' << g.params().m << ' ' << format_delta(g.params().delta) << ' ' << g.seed()
      << '\n';
  std::string buf;
  for (const Edge& e : g.edges()) {
    buf += std::to_string(e.child);
    buf += ' ';
    buf += std::to_string(e.target);
    buf += '\n';
    if (buf.size() > (1u << 16)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

void save(const PAGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  save(g, out);
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

PAGraph load(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw GraphFormatError("missing header line");

  std::istringstream header(line);
  long long t = 0;
  int m = 0;
  double delta = 0.0;
  unsigned long long seed = 0;
  std::string extra;
  if (!(header >> t >> m >> delta >> seed) || (header >> extra))
    throw GraphFormatError("malformed header: expected `t m delta seed`, got `" + line + "`");
  if (t < 1 || t > UINT32_MAX || m < 1)
    throw GraphFormatError("header declares an invalid size: `" + line + "`");
  if (static_cast<unsigned long long>(t) * static_cast<unsigned>(m) > UINT32_MAX)
    throw GraphFormatError("header declares more edges than supported");

  const std::size_t expected = static_cast<std::size_t>(t) * static_cast<std::size_t>(m);
  std::vector<Edge> edges;
  edges.reserve(expected);
  while (next_content_line(in, line)) {
    if (edges.size() == expected)
      throw GraphFormatError("trailing content after " + std::to_string(expected) + " edges");
    const char* p = line.data();
    const char* end = p + line.size();
    auto skip_ws = [&] {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    };
    Vertex child = 0;
    Vertex target = 0;
    skip_ws();
    auto r1 = std::from_chars(p, end, child);
    p = r1.ptr;
    skip_ws();
    auto r2 = std::from_chars(p, end, target);
    p = r2.ptr;
    skip_ws();
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || p != end)
      throw GraphFormatError("malformed edge line " + std::to_string(edges.size() + 2) + ": `" +
                             line + "`");
    edges.push_back({child, target});
  }
  if (edges.size() != expected)
    throw GraphFormatError("truncated file: expected " + std::to_string(expected) +
                           " edges, found " + std::to_string(edges.size()));
  try {
    return PAGraph(static_cast<std::uint32_t>(t), PAParams{m, delta}, seed, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw GraphFormatError(e.what());
  }
}

PAGraph load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load(in);
}

}  // namespace pamaj
