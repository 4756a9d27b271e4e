#include "kkwin/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kkwin {

FileSchema schema_from_string(const std::string& s) {
  if (s == "NK") return FileSchema::kNk;
  if (s == "EPS") return FileSchema::kEps;
  if (s == "LAMBDA_NK") return FileSchema::kLambdaNk;
  throw ValidationError("unknown file schema '" + s + "' (NK, EPS or LAMBDA_NK)");
}

std::string schema_to_string(FileSchema s) {
  switch (s) {
    case FileSchema::kNk: return "NK";
    case FileSchema::kEps: return "EPS";
    case FileSchema::kLambdaNk: return "LAMBDA_NK";
  }
  return "?";
}

namespace {

std::string trim(std::string s) {
  const auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

double parse_number(const std::string& cell, const std::string& where) {
  double value = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  auto [ptr, ec] = std::from_chars(b, e, value);
  if (ec != std::errc{} || ptr != e)
    throw ParseError(where + ": malformed number '" + cell + "'");
  return value;
}

const char* expected_header(FileSchema schema) {
  switch (schema) {
    case FileSchema::kNk: return "omega_eV,n,k";
    case FileSchema::kEps: return "omega_eV,eps1,eps2";
    case FileSchema::kLambdaNk: return "lambda_um,n,k";
  }
  return "";
}

}  // namespace

OpticalDataset load_dataset(const std::filesystem::path& path, FileSchema schema,
                            WarningLog* warnings) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("load_dataset: cannot open '" + path.string() + "'");

  std::string line;
  int lineno = 0;
  if (!std::getline(in, line))
    throw ParseError("load_dataset: '" + path.string() + "' is empty");
  ++lineno;
  // Strip a UTF-8 BOM if present.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  {
    const auto cells = split_csv(line);
    const auto want = split_csv(expected_header(schema));
    if (cells != want)
      throw ParseError("load_dataset: '" + path.string() +
                       "' line 1: expected header '" + expected_header(schema) +
                       "', got '" + trim(line) + "'");
  }

  struct Row {
    OpticalSample s;
    int line;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto cells = split_csv(t);
    if (cells.size() != 3)
      throw ParseError(where + ": expected 3 columns, got " +
                       std::to_string(cells.size()));
    const double c0 = parse_number(cells[0], where);
    const double c1 = parse_number(cells[1], where);
    const double c2 = parse_number(cells[2], where);

    OpticalSample s;
    switch (schema) {
      case FileSchema::kNk:
        s = {Frequency{c0}, c1, c2};
        break;
      case FileSchema::kEps: {
        if (c2 < 0.0) throw ParseError(where + ": eps2 < 0");
        double n, k;
        nk_from_eps({c1, c2}, n, k);
        s = {Frequency{c0}, n, k};
        break;
      }
      case FileSchema::kLambdaNk: {
        if (!(c0 > 0.0)) throw ParseError(where + ": lambda must be > 0");
        s = {from_wavelength_um(c0), c1, c2};
        break;
      }
    }
    if (!(s.omega.ev > 0.0)) throw ParseError(where + ": omega must be > 0");
    if (!(s.n > 0.0)) throw ParseError(where + ": n <= 0");
    if (s.k < 0.0) throw ParseError(where + ": k < 0");
    rows.push_back({s, lineno});
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.s.omega.ev < b.s.omega.ev;
  });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].s.omega.ev == rows[i - 1].s.omega.ev)
      throw ParseError("load_dataset: '" + path.string() +
                       "': duplicate frequency " + std::to_string(rows[i].s.omega.ev) +
                       " eV (lines " + std::to_string(rows[i - 1].line) + ", " +
                       std::to_string(rows[i].line) + ")");

  std::vector<OpticalSample> samples;
  samples.reserve(rows.size());
  for (const auto& r : rows) samples.push_back(r.s);
  if (warnings && schema == FileSchema::kLambdaNk)
    warn(warnings, "load_dataset: '" + path.string() +
                       "' wavelength order reversed to ascending omega");
  return OpticalDataset::create(std::move(samples), path.stem().string(),
                                "loaded from " + path.string() + " (schema " +
                                    schema_to_string(schema) + ")");
}

OpticalDataset merge_datasets(
    const std::vector<OpticalDataset>& sets,
    const std::vector<std::pair<Frequency, Frequency>>& exclusions,
    WarningLog* warnings) {
  if (sets.empty()) throw ValidationError("merge_datasets: no datasets");
  for (const auto& ex : exclusions)
    if (!(ex.second.ev > ex.first.ev))
      throw ValidationError("merge_datasets: empty exclusion interval");

  const auto excluded = [&](double w) {
    for (const auto& ex : exclusions)
      if (w >= ex.first.ev && w < ex.second.ev) return true;
    return false;
  };

  struct Tagged {
    OpticalSample s;
    std::size_t origin;
  };
  std::vector<Tagged> all;
  std::ostringstream meta;
  for (std::size_t si = 0; si < sets.size(); ++si) {
    const auto& d = sets[si];
    std::size_t kept = 0, shadowed = 0, cut = 0;
    for (const auto& s : d.samples()) {
      // Earlier datasets own their full coverage interval: later samples
      // inside it are dropped (handbook-style overlaps carry conflicting
      // values; silent mixing would hide the inconsistency).
      bool covered = false;
      for (std::size_t sj = 0; sj < si && !covered; ++sj)
        covered = s.omega.ev >= sets[sj].omega_min().ev &&
                  s.omega.ev <= sets[sj].omega_max().ev;
      if (covered) {
        ++shadowed;
        continue;
      }
      if (excluded(s.omega.ev)) {
        ++cut;
        continue;
      }
      all.push_back({s, si});
      ++kept;
    }
    meta << (si ? "; " : "") << d.label() << ": kept " << kept << ", shadowed "
         << shadowed << ", excluded " << cut;
    if (shadowed)
      warn(warnings, "merge_datasets: dropped " + std::to_string(shadowed) +
                         " sample(s) of '" + d.label() +
                         "' inside earlier datasets' coverage (first wins)");
  }
  if (all.size() < 4)
    throw ValidationError(
        "merge_datasets: fewer than 4 samples survive the merge/exclusions");

  std::stable_sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) {
    return a.s.omega.ev < b.s.omega.ev;
  });

  // Provenance runs per origin.
  std::ostringstream runs;
  std::size_t run_begin = 0;
  for (std::size_t i = 1; i <= all.size(); ++i) {
    if (i == all.size() || all[i].origin != all[run_begin].origin) {
      runs << "[" << all[run_begin].s.omega.ev << ", " << all[i - 1].s.omega.ev
           << "] eV from '" << sets[all[run_begin].origin].label() << "' ("
           << (i - run_begin) << " samples); ";
      run_begin = i;
    }
  }

  std::vector<OpticalSample> samples;
  samples.reserve(all.size());
  for (const auto& t : all) samples.push_back(t.s);
  std::string label = sets.front().label();
  for (std::size_t i = 1; i < sets.size(); ++i) label += "+" + sets[i].label();
  return OpticalDataset::create(std::move(samples), label,
                                runs.str() + "| " + meta.str());
}

SyntheticSpec synthetic_preset(const std::string& name) {
  if (name == "drude-gold") return {gold_drude_params(), {}, name};
  if (name == "drude-lorentz-gold")
    return {gold_drude_params(), gold_interband_oscillators(), name};
  throw ValidationError("synthetic_preset: unknown preset '" + name +
                        "' (drude-gold, drude-lorentz-gold)");
}

void emit_synthetic(const SyntheticSpec& spec, const std::vector<Frequency>& grid,
                    const std::filesystem::path& path) {
  const OpticalDataset d = synthetic_dataset(spec.drude, spec.oscillators, grid,
                                             spec.name.empty() ? "synthetic" : spec.name);
  std::ofstream out(path);
  if (!out)
    throw ParseError("emit_synthetic: cannot write '" + path.string() + "'");
  out << "omega_eV,n,k\n";
  char buf[3 * 32];
  for (const auto& s : d.samples()) {
    auto put = [&](double v, char* p) {
      auto [end, ec] = std::to_chars(p, p + 31, v);
      *end = '\0';
      return p;
    };
    out << put(s.omega.ev, buf) << ',' << put(s.n, buf + 32) << ','
        << put(s.k, buf + 64) << '\n';
  }
  if (!out) throw ParseError("emit_synthetic: write failed for '" + path.string() + "'");
}

}  // namespace kkwin
