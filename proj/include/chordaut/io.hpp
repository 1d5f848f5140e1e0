#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "graph.hpp"

namespace chordaut {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Decodes one graph6 line (the optional ">>graph6<<" header is accepted).
inline Graph read_graph6(std::string_view text) {
  std::string s = detail::trim(text);
  constexpr std::string_view header = ">>graph6<<";
  if (s.rfind(header, 0) == 0) s = s.substr(header.size());
  if (s.empty()) throw ParseError("graph6: empty input");
  for (unsigned char c : s)
    if (c < 63 || c > 126) throw ParseError("graph6: byte out of range");
  std::size_t pos = 0;
  auto take = [&](int count) {
    long long v = 0;
    for (int i = 0; i < count; ++i) {
      if (pos >= s.size()) throw ParseError("graph6: truncated size field");
      v = (v << 6) | (static_cast<unsigned char>(s[pos++]) - 63);
    }
    return v;
  };
  long long n;
  if (static_cast<unsigned char>(s[0]) != 126) {
    n = take(1);
  } else if (s.size() > 1 && static_cast<unsigned char>(s[1]) == 126) {
    pos = 2;
    n = take(6);
  } else {
    pos = 1;
    n = take(3);
  }
  if (n > 100000) throw ParseError("graph6: graph too large");
  const long long bits = n * (n - 1) / 2;
  const std::size_t need = static_cast<std::size_t>((bits + 5) / 6);
  if (s.size() - pos != need) throw ParseError("graph6: wrong payload length");
  std::vector<std::pair<int, int>> edges;
  long long k = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++k) {
      int byte = static_cast<unsigned char>(s[pos + k / 6]) - 63;
      if ((byte >> (5 - k % 6)) & 1) edges.emplace_back(i, j);
    }
  return Graph::from_edges(static_cast<int>(n), edges);
}

inline std::string write_graph6(const Graph& g) {
  std::string out;
  const long long n = g.n();
  auto put = [&](long long v, int count) {
    for (int i = count - 1; i >= 0; --i) out.push_back(static_cast<char>(63 + ((v >> (6 * i)) & 63)));
  };
  if (n <= 62) {
    put(n, 1);
  } else if (n <= 258047) {
    out.push_back(126);
    put(n, 3);
  } else {
    out += "\x7e\x7e";
    put(n, 6);
  }
  int acc = 0, nbits = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
      if (++nbits == 6) {
        out.push_back(static_cast<char>(63 + acc));
        acc = nbits = 0;
      }
    }
  if (nbits > 0) out.push_back(static_cast<char>(63 + (acc << (6 - nbits))));
  return out;
}

/// "n m" header then m lines "u v" with 0-based endpoints.
inline Graph read_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long n, m;
  if (!(in >> n >> m) || n < 0 || m < 0) throw ParseError("edge list: bad header");
  std::vector<std::pair<int, int>> edges;
  for (long long i = 0; i < m; ++i) {
    long long u, v;
    if (!(in >> u >> v)) throw ParseError("edge list: expected " + std::to_string(m) + " edges");
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("edge list: endpoint out of range");
    if (u == v) throw ParseError("edge list: self-loop");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  std::string rest;
  if (in >> rest) throw ParseError("edge list: trailing data");
  return Graph::from_edges(static_cast<int>(n), edges);
}

inline std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  auto es = g.edges();
  out << g.n() << ' ' << es.size() << '\n';
  for (auto [u, v] : es) out << u << ' ' << v << '\n';
  return out.str();
}

/// Graph6 when the first visible byte is a graph6 byte, else an edge list.
inline Graph parse_graph(std::string_view text) {
  std::string s = detail::trim(text);
  if (s.empty()) throw ParseError("empty graph input");
  unsigned char c = static_cast<unsigned char>(s[0]);
  if (c >= 63 && c <= 126) {
    auto nl = s.find('\n');
    if (nl != std::string::npos && !detail::trim(s.substr(nl)).empty())
      throw ParseError("graph6: only one graph per file is supported");
    return read_graph6(s);
  }
  return read_edge_list(s);
}

/// Lines "v c"; vertices not listed get color 0. Colors are arbitrary integers.
inline Coloring parse_coloring(std::string_view text, int n) {
  std::istringstream in{std::string(text)};
  std::vector<long long> labels(n, 0);
  std::vector<bool> seen(n, false);
  long long v, c;
  while (in >> v) {
    if (!(in >> c)) throw ParseError("coloring: missing color");
    if (v < 0 || v >= n) throw ParseError("coloring: vertex out of range");
    if (seen[v]) throw ParseError("coloring: vertex listed twice");
    seen[v] = true;
    labels[v] = c;
  }
  if (!in.eof()) throw ParseError("coloring: malformed line");
  return Coloring::from_labels(labels);
}

inline std::string write_coloring(const Coloring& pi) {
  std::ostringstream out;
  for (int v = 0; v < pi.n(); ++v) out << v << ' ' << pi.color(v) << '\n';
  return out.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace chordaut
