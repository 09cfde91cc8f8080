#include "qfent/symbol_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <vector>

namespace qfent {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::config, "key '" + key + "': not a number: '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto t = trim(v);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc{} || p != t.data() + t.size()) {
    throw Error(ErrorKind::config, "key '" + key + "': not an integer: '" + v + "'");
  }
  return out;
}

std::vector<std::string> split_any(const std::string& s, std::string_view seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string_view::npos) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

struct Entry {
  std::array<int, kMaxDimension> j{};
  std::complex<double> value;
};

FourierTable table_from_entries(const std::vector<Entry>& entries, int dim) {
  int cutoff = 0;
  for (const auto& e : entries) {
    for (int k = 0; k < dim; ++k) cutoff = std::max(cutoff, std::abs(e.j[k]));
  }
  FourierTable table(dim, cutoff);
  for (const auto& e : entries) table.at(std::span<const int>(e.j.data(), dim)) = e.value;
  return table;
}

const std::set<std::string> kAllowed = {"kind", "dimension", "label", "value", "beta", "mu", "hopping",
                                        "coefficients", "table", "samples", "grid_size"};

const std::map<std::string, std::set<std::string>> kPerKind = {
    {"constant", {"value"}},
    {"cosine-thermal", {"beta", "mu", "hopping"}},
    {"fourier-table", {"coefficients", "table"}},
    {"grid", {"samples", "grid_size"}},
};

}  // namespace

Symbol parse_symbol_config(const std::string& text, const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::config, "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!kAllowed.count(key)) throw Error(ErrorKind::config, "unknown key '" + key + "'");
    if (kv.count(key)) throw Error(ErrorKind::config, "duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }

  if (!kv.count("kind")) throw Error(ErrorKind::config, "missing key 'kind'");
  const std::string kind = kv["kind"];
  const auto allowed = kPerKind.find(kind);
  if (allowed == kPerKind.end()) throw Error(ErrorKind::config, "unknown symbol kind '" + kind + "'");
  for (const auto& [key, _] : kv) {
    if (key == "kind" || key == "dimension" || key == "label") continue;
    if (!allowed->second.count(key)) {
      throw Error(ErrorKind::config, "key '" + key + "' does not apply to kind '" + kind + "'");
    }
  }

  const int dim = kv.count("dimension") ? to_int("dimension", kv["dimension"]) : 1;
  if (dim < 1 || dim > kMaxDimension) throw Error(ErrorKind::config, "dimension must be 1, 2 or 3");
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorKind::config, "kind '" + kind + "' requires key '" + key + "'");
    return it->second;
  };

  Symbol sym = [&]() -> Symbol {
    if (kind == "constant") {
      return make_constant_symbol(dim, to_double("value", get("value")));
    }
    if (kind == "cosine-thermal") {
      const double beta = to_double("beta", get("beta"));
      const double mu = kv.count("mu") ? to_double("mu", kv["mu"]) : 0.0;
      const double hop = kv.count("hopping") ? to_double("hopping", kv["hopping"]) : 1.0;
      if (!(beta > 0.0)) throw Error(ErrorKind::config, "beta must be positive");
      return make_cosine_thermal_symbol(dim, beta, mu, hop);
    }
    if (kind == "fourier-table") {
      if (kv.count("coefficients") == kv.count("table")) {
        throw Error(ErrorKind::config, "fourier-table needs exactly one of 'coefficients' or 'table'");
      }
      FourierTable table(dim, 0);
      if (kv.count("table")) {
        std::filesystem::path p = kv["table"];
        if (p.is_relative()) p = base_dir / p;
        table = read_fourier_csv(p, dim);
      } else {
        std::vector<Entry> entries;
        for (const auto& item : split_any(kv["coefficients"], ";")) {
          const auto parts = split_any(item, " \t,");
          if (static_cast<int>(parts.size()) != dim + 2) {
            throw Error(ErrorKind::config, "coefficient entry '" + item + "' needs " + std::to_string(dim) +
                                               " indices plus re and im");
          }
          Entry e;
          for (int k = 0; k < dim; ++k) e.j[k] = to_int("coefficients", parts[k]);
          e.value = {to_double("coefficients", parts[dim]), to_double("coefficients", parts[dim + 1])};
          entries.push_back(e);
        }
        if (entries.empty()) throw Error(ErrorKind::config, "empty coefficient list");
        table = table_from_entries(entries, dim);
      }
      return Symbol::from_fourier(std::move(table), "fourier-table");
    }
    // grid
    std::vector<double> samples;
    for (const auto& s : split_any(get("samples"), " \t,;")) samples.push_back(to_double("samples", s));
    int n = 0;
    if (kv.count("grid_size")) {
      n = to_int("grid_size", kv["grid_size"]);
    } else {
      n = static_cast<int>(std::lround(std::pow(static_cast<double>(samples.size()), 1.0 / dim)));
    }
    return Symbol::from_grid(dim, n, std::move(samples), "grid");
  }();

  if (kv.count("label")) sym = sym.with_label(kv["label"]);
  return sym;
}

Symbol load_symbol_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open symbol file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_symbol_config(buf.str(), path.parent_path());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw Error(ErrorKind::config, path.string() + ": " + e.what());
    throw;
  }
}

FourierTable read_fourier_csv(std::istream& in, int dimension) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::config, "empty coefficient CSV");
  const auto header = split_any(line, ",");
  std::vector<std::string> expected;
  if (dimension == 1) {
    expected = {"j"};
  } else {
    for (int k = 1; k <= dimension; ++k) expected.push_back("j" + std::to_string(k));
  }
  expected.push_back("re");
  expected.push_back("im");
  if (header != expected) throw Error(ErrorKind::config, "unexpected coefficient CSV header '" + line + "'");

  std::vector<Entry> entries;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_any(line, ",");
    if (cells.size() != expected.size()) throw Error(ErrorKind::config, "bad coefficient CSV row '" + line + "'");
    Entry e;
    for (int k = 0; k < dimension; ++k) e.j[k] = to_int("j", cells[k]);
    e.value = {to_double("re", cells[dimension]), to_double("im", cells[dimension + 1])};
    entries.push_back(e);
  }
  if (entries.empty()) throw Error(ErrorKind::config, "coefficient CSV has no rows");
  return table_from_entries(entries, dimension);
}

FourierTable read_fourier_csv(const std::filesystem::path& path, int dimension) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open coefficient table '" + path.string() + "'");
  return read_fourier_csv(in, dimension);
}

void write_fourier_csv(std::ostream& out, const FourierTable& table) {
  const int d = table.dimension();
  if (d == 1) {
    out << "j";
  } else {
    for (int k = 1; k <= d; ++k) out << (k > 1 ? "," : "") << 'j' << k;
  }
  out << ",re,im\n";
  out << std::setprecision(17);
  for (std::size_t f = 0; f < table.size(); ++f) {
    const auto j = table.multi_index(f);
    for (int k = 0; k < d; ++k) out << (k ? "," : "") << j[k];
    out << ',' << table.data()[f].real() << ',' << table.data()[f].imag() << '\n';
  }
}

}  // namespace qfent
