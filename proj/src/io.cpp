#include "cpl/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cpl {

std::string format_double(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw io_error("bad number: '" + s + "'");
  return v;
}

namespace {

// Strips comments, splits into whitespace tokens, drops blank lines.
std::vector<std::vector<std::string>> tokenize(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  return lines;
}

[[noreturn]] void parse_fail(std::size_t lineno, const std::string& msg) {
  throw io_error("line " + std::to_string(lineno + 1) + ": " + msg);
}

}  // namespace

std::string emit_distribution(const DiscreteDistribution& f) {
  std::string out = "dim " + std::to_string(f.dim()) + "\n";
  for (const auto& a : f.atoms()) {
    for (double c : a.x) {
      out += format_double(c);
      out += ' ';
    }
    out += format_double(a.mass);
    out += '\n';
  }
  return out;
}

DiscreteDistribution parse_distribution(std::istream& in) {
  auto lines = tokenize(in);
  if (lines.empty() || lines[0].size() != 2 || lines[0][0] != "dim")
    throw io_error("distribution literal must start with 'dim <d>'");
  int dim = std::stoi(lines[0][1]);
  std::vector<Atom> atoms;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& toks = lines[li];
    if (static_cast<int>(toks.size()) != dim + 1)
      parse_fail(li, "expected " + std::to_string(dim) + " coordinates and a mass");
    Point x(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] =
        parse_double(toks[static_cast<std::size_t>(i)]);
    atoms.push_back({std::move(x), parse_double(toks.back())});
  }
  return DiscreteDistribution(dim, std::move(atoms));
}

DiscreteDistribution parse_distribution_text(const std::string& text) {
  std::istringstream in(text);
  return parse_distribution(in);
}

DiscreteDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  return parse_distribution(in);
}

std::string emit_polyhedron(const Polyhedron& p) {
  std::string out = "m " + std::to_string(p.num_halfspaces()) + "\n";
  for (const auto& h : p.halfspaces()) {
    for (double c : h.direction) {
      out += format_double(c);
      out += ' ';
    }
    out += format_double(h.threshold);
    out += '\n';
  }
  return out;
}

Polyhedron parse_polyhedron(std::istream& in) {
  auto lines = tokenize(in);
  if (lines.empty() || lines[0].size() != 2 || lines[0][0] != "m")
    throw io_error("polyhedron literal must start with 'm <count>'");
  std::size_t m = static_cast<std::size_t>(std::stoul(lines[0][1]));
  if (lines.size() != m + 1) throw io_error("halfspace count mismatch");
  if (m == 0) throw io_error("polyhedron needs at least one halfspace");
  int dim = static_cast<int>(lines[1].size()) - 1;
  std::vector<Halfspace> hs;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& toks = lines[li];
    if (static_cast<int>(toks.size()) != dim + 1)
      parse_fail(li, "inconsistent halfspace dimension");
    Point t(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
      t[static_cast<std::size_t>(i)] = parse_double(toks[static_cast<std::size_t>(i)]);
    hs.push_back({std::move(t), parse_double(toks.back())});
  }
  return Polyhedron(dim, std::move(hs));
}

Polyhedron parse_polyhedron_text(const std::string& text) {
  std::istringstream in(text);
  return parse_polyhedron(in);
}

Polyhedron load_polyhedron(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  return parse_polyhedron(in);
}

std::string emit_integer_pmf(const IntegerPmf& u) {
  std::string out;
  for (std::size_t k = 0; k < u.masses().size(); ++k) {
    if (u.masses()[k] == 0.0) continue;
    out += std::to_string(k);
    out += ' ';
    out += format_double(u.masses()[k]);
    out += '\n';
  }
  return out;
}

IntegerPmf parse_integer_pmf(std::istream& in) {
  auto lines = tokenize(in);
  std::vector<double> masses;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (lines[li].size() != 2) parse_fail(li, "expected 'k mass'");
    std::size_t k = static_cast<std::size_t>(std::stoul(lines[li][0]));
    if (k >= masses.size()) masses.resize(k + 1, 0.0);
    masses[k] = parse_double(lines[li][1]);
  }
  if (masses.empty()) throw io_error("empty integer pmf");
  return IntegerPmf(std::move(masses));
}

IntegerPmf load_integer_pmf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  return parse_integer_pmf(in);
}

RareEventModel parse_model(std::istream& in, const std::string& base_dir) {
  std::string line;
  std::size_t lineno = 0;
  auto next_tokens = [&](std::vector<std::string>& toks) {
    toks.clear();
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next_tokens(toks) || toks.size() != 2 || toks[0] != "n")
    throw io_error("model config must start with 'n <count>'");
  std::size_t n = static_cast<std::size_t>(std::stoul(toks[1]));
  std::vector<RareEventModel::Entry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    if (!next_tokens(toks) || toks.size() < 3 || toks[0] != "p")
      throw io_error("expected 'p <value> file <path>' or 'p <value> inline'");
    double p = parse_double(toks[1]);
    if (toks[2] == "file" && toks.size() == 4) {
      auto path = std::filesystem::path(base_dir) / toks[3];
      entries.emplace_back(p, load_distribution(path.string()));
    } else if (toks[2] == "inline" && toks.size() == 3) {
      std::string block;
      for (;;) {
        if (!next_tokens(toks)) throw io_error("unterminated inline literal");
        if (toks.size() == 1 && toks[0] == "end") break;
        for (const auto& t : toks) {
          block += t;
          block += ' ';
        }
        block += '\n';
      }
      entries.emplace_back(p, parse_distribution_text(block));
    } else {
      throw io_error("bad model entry near line " + std::to_string(lineno));
    }
  }
  return RareEventModel(std::move(entries));
}

RareEventModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  return parse_model(in, std::filesystem::path(path).parent_path().string());
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code dir_ec;
    fs::create_directories(target.parent_path(), dir_ec);
    if (dir_ec)
      throw io_error("cannot create directory " +
                     target.parent_path().string());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw io_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw io_error("rename failed for " + target.string());
  }
}

}  // namespace cpl
