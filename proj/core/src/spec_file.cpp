#include "funceq/spec_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "funceq/errors.hpp"
#include "funceq/expr.hpp"

namespace funceq {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

struct RawEntry {
  std::string value;
  int line = 0;
};

double parse_real(std::string_view s, int line, const std::string& key) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end || !std::isfinite(v)) {
    throw SpecFileError(line, key + ": expected a finite real, got '" + std::string(s) + "'");
  }
  return v;
}

long parse_integer(std::string_view s, int line, const std::string& key) {
  long v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) {
    throw SpecFileError(line, key + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

Expr parse_expr_entry(const RawEntry& e, const std::string& key) {
  try {
    return Expr::parse(e.value);
  } catch (const ParseError& pe) {
    throw SpecFileError(e.line, key + ": " + pe.what());
  }
}

std::vector<double> parse_breakpoints(const RawEntry& e, const std::string& key) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const std::size_t comma = rest.find(',');
    const std::string_view tok = trim(rest.substr(0, comma));
    if (tok.empty()) {
      throw SpecFileError(e.line, key + ": empty entry in breakpoint list");
    }
    const double v = parse_real(tok, e.line, key);
    if (v < 0.0 || v > 1.0) {
      throw SpecFileError(e.line, key + ": breakpoint " + format_double(v) +
                                      " is outside [0,1]");
    }
    if (!out.empty() && v < out.back()) {
      throw SpecFileError(e.line, key + ": breakpoints must be ascending");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

LoadedSpec parse_spec_text(std::string_view text) {
  std::map<std::string, RawEntry> entries;
  bool in_equation = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++line_no;
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line == "[equation]") {
        in_equation = true;
        continue;
      }
      throw SpecFileError(line_no, "unknown section " + std::string(line));
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw SpecFileError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    }
    if (!in_equation) {
      throw SpecFileError(line_no, "key outside the [equation] section");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) throw SpecFileError(line_no, "empty key");
    if (value.empty()) throw SpecFileError(line_no, key + ": empty value");
    if (!entries.emplace(key, RawEntry{value, line_no}).second) {
      throw SpecFileError(line_no, "duplicate key '" + key + "'");
    }
  }
  if (!in_equation) throw SpecFileError(line_no, "missing [equation] section");

  auto take = [&entries](const std::string& key) -> std::optional<RawEntry> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    RawEntry e = it->second;
    entries.erase(it);
    return e;
  };

  const auto n_entry = take("N");
  if (!n_entry) throw SpecFileError(line_no, "missing key N");
  const long n = parse_integer(n_entry->value, n_entry->line, "N");
  if (n < 1 || n > 64) {
    throw SpecFileError(n_entry->line, "N must be between 1 and 64, got " + n_entry->value);
  }

  int resolution = EquationSpec::kDefaultResolution;
  if (const auto m_entry = take("M")) {
    const long m = parse_integer(m_entry->value, m_entry->line, "M");
    if (m < 16 || m % 2 != 0 || m > (1 << 24)) {
      throw SpecFileError(m_entry->line, "M must be an even integer >= 16, got " + m_entry->value);
    }
    resolution = static_cast<int>(m);
  }

  std::optional<double> c_hint;
  if (const auto c_entry = take("C_hint")) {
    c_hint = parse_real(c_entry->value, c_entry->line, "C_hint");
  }

  const auto g_entry = take("g");
  if (!g_entry) throw SpecFileError(line_no, "missing key g");
  const Expr inhom = parse_expr_entry(*g_entry, "g");

  std::vector<MapSpec> maps;
  std::vector<Expr> coeffs;
  for (long i = 1; i <= n; ++i) {
    const std::string fk = "f" + std::to_string(i);
    const std::string gk = "g" + std::to_string(i);
    const auto f_entry = take(fk);
    if (!f_entry) throw SpecFileError(line_no, "missing key " + fk + " (N = " + n_entry->value + ")");
    const auto g_coeff = take(gk);
    if (!g_coeff) throw SpecFileError(line_no, "missing key " + gk + " (N = " + n_entry->value + ")");
    const Expr f = parse_expr_entry(*f_entry, fk);
    std::vector<double> breakpoints;
    if (const auto b_entry = take(fk + ".breakpoints")) {
      breakpoints = parse_breakpoints(*b_entry, fk + ".breakpoints");
    }
    try {
      maps.push_back(MapSpec::make(f, std::move(breakpoints), 10 * resolution));
    } catch (const Error& err) {
      throw SpecFileError(f_entry->line, fk + ": " + err.what());
    }
    coeffs.push_back(parse_expr_entry(*g_coeff, gk));
  }

  if (!entries.empty()) {
    const auto& [key, entry] = *entries.begin();
    throw SpecFileError(entry.line, "unknown key '" + key + "'");
  }

  try {
    return LoadedSpec{EquationSpec(std::move(maps), std::move(coeffs), inhom, resolution),
                      c_hint};
  } catch (const Error& err) {
    throw SpecFileError(line_no, err.what());
  }
}

LoadedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecFileError(0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

}  // namespace funceq
