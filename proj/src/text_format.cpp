#include "strata/text_format.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <sstream>

namespace strata {

using json = nlohmann::json;

ParseError::ParseError(const std::string& message, std::string field, std::size_t line)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? "" : field + ": ") + message),
      field_(std::move(field)),
      line_(line) {}

namespace {

const char* const kStructureFormat = "strata-incidence/1";
const char* const kFamilyFormat = "strata-family/1";

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    std::string msg = e.what();
    if (auto p = msg.find(": syntax error"); p != std::string::npos) msg = msg.substr(p + 2);
    throw ParseError(msg, "", line);
  }
}

const json& member(const json& obj, const char* name, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object", path);
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError("missing field", path.empty() ? std::string(name) : path + "." + name);
  return *it;
}

const json& array_at(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("expected an array", path);
  return v;
}

Integer read_integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Integer(std::to_string(v.get<std::uint64_t>()));
    return Integer(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    static const std::regex digits("-?[0-9]+");
    const auto& s = v.get_ref<const std::string&>();
    if (std::regex_match(s, digits)) return Integer(s);
  }
  throw ParseError("malformed integer", path);
}

int read_small(const json& v, const std::string& path) {
  const Integer x = read_integer(v, path);
  if (!x.fits_sint_p()) throw ParseError("integer out of range", path);
  return static_cast<int>(x.get_si());
}

std::vector<Integer> read_integers(const json& v, const std::string& path) {
  std::vector<Integer> out;
  const json& arr = array_at(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_integer(arr[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

StratumKey read_key(const json& v, const std::string& path) {
  StratumKey k;
  const json& arr = array_at(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) k.push_back(read_small(arr[i], path + "[" + std::to_string(i) + "]"));
  if (!is_valid_key(k)) throw ParseError("key must be a nonempty strictly increasing list", path);
  return k;
}

std::string read_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError("expected a string", path);
  return v.get<std::string>();
}

void check_format(const json& doc, const char* want) {
  const std::string got = read_string(member(doc, "format", ""), "format");
  if (got != want) throw ParseError("expected \"" + std::string(want) + "\", got \"" + got + "\"", "format");
}

json write_integer(const Integer& x) {
  if (x.fits_slong_p()) return json(static_cast<std::int64_t>(x.get_si()));
  return json(x.get_str());
}

json write_integers(const std::vector<Integer>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back(write_integer(x));
  return arr;
}

// Objects one key per line, arrays of scalars on one line.
void emit(std::ostringstream& os, const json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) os << ",\n";
      first = false;
      os << inner << json(it.key()).dump() << ": ";
      emit(os, it.value(), indent + 2);
    }
    os << "\n" << pad << "}";
  } else if (v.is_array()) {
    const bool flat = std::all_of(v.begin(), v.end(), [](const json& e) {
      return e.is_primitive() || (e.is_array() && std::all_of(e.begin(), e.end(), [](const json& x) { return x.is_primitive(); }));
    });
    if (flat || v.empty()) {
      os << '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        if (v[i].is_array())
          emit(os, v[i], indent);
        else
          os << v[i].dump();
      }
      os << ']';
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ",\n";
      os << inner;
      emit(os, v[i], indent + 2);
    }
    os << "\n" << pad << "]";
  } else {
    os << v.dump();
  }
}

std::string render(const json& doc) {
  std::ostringstream os;
  emit(os, doc, 0);
  os << '\n';
  return os.str();
}

// --- presentations --------------------------------------------------------

PresentationPtr read_presentation(const json& v, const std::string& path) {
  const std::string kind = read_string(member(v, "kind", path), path + ".kind");
  if (kind == "projective_product") {
    std::vector<int> dims;
    const std::string dpath = path + ".dims";
    const json& arr = array_at(member(v, "dims", path), dpath);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const int d = read_small(arr[i], dpath + "[" + std::to_string(i) + "]");
      if (d < 0) throw ParseError("dimension must be nonnegative", dpath + "[" + std::to_string(i) + "]");
      dims.push_back(d);
    }
    return ChowPresentation::projective_product(std::move(dims));
  }
  if (kind != "explicit") throw ParseError("unknown presentation kind '" + kind + "'", path + ".kind");

  const int dim = read_small(member(v, "dim", path), path + ".dim");
  if (dim < 0) throw ParseError("dimension must be nonnegative", path + ".dim");
  std::vector<std::vector<std::string>> basis;
  std::map<std::string, std::size_t> index;
  const std::string bpath = path + ".basis";
  const json& barr = array_at(member(v, "basis", path), bpath);
  for (std::size_t k = 0; k < barr.size(); ++k) {
    const std::string kpath = bpath + "[" + std::to_string(k) + "]";
    basis.emplace_back();
    for (std::size_t g = 0; g < array_at(barr[k], kpath).size(); ++g) {
      std::string name = read_string(barr[k][g], kpath + "[" + std::to_string(g) + "]");
      index.emplace(name, index.size());
      basis.back().push_back(std::move(name));
    }
  }
  auto lookup = [&](const json& x, const std::string& p) -> std::size_t {
    if (x.is_string()) {
      auto it = index.find(x.get<std::string>());
      if (it == index.end()) throw ParseError("unknown basis element '" + x.get<std::string>() + "'", p);
      return it->second;
    }
    const int g = read_small(x, p);
    if (g < 0 || static_cast<std::size_t>(g) >= index.size()) throw ParseError("basis index out of range", p);
    return static_cast<std::size_t>(g);
  };
  std::vector<ChowPresentation::ProductEntry> products;
  const std::string spath = path + ".structure_constants";
  const json& sarr = array_at(member(v, "structure_constants", path), spath);
  for (std::size_t e = 0; e < sarr.size(); ++e) {
    const std::string epath = spath + "[" + std::to_string(e) + "]";
    products.push_back({lookup(member(sarr[e], "a", epath), epath + ".a"),
                        lookup(member(sarr[e], "b", epath), epath + ".b"),
                        read_integers(member(sarr[e], "product", epath), epath + ".product")});
  }
  std::vector<Integer> degree = read_integers(member(v, "degree", path), path + ".degree");
  try {
    return ChowPresentation::explicit_ring(dim, std::move(basis), products, std::move(degree));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), path);
  }
}

json write_presentation(const PresentationPtr& p) {
  json out;
  if (p->projective_dims()) {
    out["kind"] = "projective_product";
    out["dims"] = *p->projective_dims();
    return out;
  }
  out["kind"] = "explicit";
  out["dim"] = p->dim();
  json basis = json::array();
  for (int k = 0; k <= p->dim(); ++k) {
    json names = json::array();
    for (std::size_t g = p->offset(k); g < p->offset(k) + p->rank(k); ++g) names.push_back(p->name(g));
    basis.push_back(std::move(names));
  }
  out["basis"] = std::move(basis);
  json sc = json::array();
  for (std::size_t a = 0; a < p->size(); ++a)
    for (std::size_t b = a; b < p->size(); ++b) {
      const auto& c = p->product(a, b);
      if (std::all_of(c.begin(), c.end(), [](const Integer& x) { return x == 0; })) continue;
      sc.push_back({{"a", p->name(a)}, {"b", p->name(b)}, {"product", write_integers(c)}});
    }
  out["structure_constants"] = std::move(sc);
  out["degree"] = write_integers(p->degree_functional());
  return out;
}

GradedMap read_map(const json& v, const std::string& path, MapKind kind, const PresentationPtr& src,
                   const PresentationPtr& dst, int shift) {
  const json& arr = array_at(v, path);
  if (arr.size() != src->size())
    throw ParseError("expected " + std::to_string(src->size()) + " images, got " + std::to_string(arr.size()), path);
  std::vector<ChowClass> images;
  for (std::size_t g = 0; g < arr.size(); ++g) {
    const std::string gpath = path + "[" + std::to_string(g) + "]";
    std::vector<Integer> c = read_integers(arr[g], gpath);
    const int codim = src->codim_of(g) + shift;
    if (c.size() != dst->rank(codim))
      throw ParseError("image of " + src->name(g) + " needs " + std::to_string(dst->rank(codim)) + " coefficients",
                       gpath);
    images.emplace_back(dst, codim, std::move(c));
  }
  return GradedMap(kind, src, dst, shift, std::move(images));
}

json write_map(const GradedMap& m) {
  json arr = json::array();
  for (std::size_t g = 0; g < m.source()->size(); ++g) arr.push_back(write_integers(m.image(g).coeffs()));
  return arr;
}

json write_key(const StratumKey& k) { return json(k); }

}  // namespace

IncidenceStructure parse_structure(const std::string& text) {
  const json doc = parse_json(text);
  check_format(doc, kStructureFormat);
  const int t = read_small(member(doc, "t", ""), "t");
  const int n = read_small(member(doc, "n", ""), "n");
  IncidenceStructure s(t, n);

  std::map<std::string, PresentationPtr> interned;
  const json& strata = array_at(member(doc, "strata", ""), "strata");
  for (std::size_t i = 0; i < strata.size(); ++i) {
    const std::string path = "strata[" + std::to_string(i) + "]";
    StratumKey key = read_key(member(strata[i], "key", path), path + ".key");
    PresentationPtr p = read_presentation(member(strata[i], "presentation", path), path + ".presentation");
    auto [it, fresh] = interned.emplace(p->signature(), p);
    if (s.has(key)) throw ParseError("stratum " + key_string(key) + " given twice", path + ".key");
    s.add_stratum(std::move(key), it->second);
  }

  const json& edges = array_at(member(doc, "edges", ""), "edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "edges[" + std::to_string(i) + "]";
    StratumKey from = read_key(member(edges[i], "from", path), path + ".from");
    StratumKey to = read_key(member(edges[i], "to", path), path + ".to");
    if (!s.has(from) || !s.has(to)) {
      s.note_problem("edge " + key_string(from) + " -> " + key_string(to) + " joins an absent stratum");
      continue;
    }
    const PresentationPtr& a = s.stratum(from);
    const PresentationPtr& b = s.stratum(to);
    std::optional<GradedMap> pull;
    std::optional<GradedMap> push;
    try {
      if (edges[i].contains("pullback") && !edges[i]["pullback"].is_null())
        pull = read_map(edges[i]["pullback"], path + ".pullback", MapKind::ring, a, b, 0);
      if (edges[i].contains("pushforward") && !edges[i]["pushforward"].is_null())
        push = read_map(edges[i]["pushforward"], path + ".pushforward", MapKind::additive, b, a, 1);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), path);
    }
    if (s.edges().count({from, to})) throw ParseError("edge given twice", path);
    s.add_edge(std::move(from), std::move(to), std::move(pull), std::move(push));
  }
  return s;
}

std::string write_structure(const IncidenceStructure& s) {
  json doc;
  doc["format"] = kStructureFormat;
  doc["t"] = s.t();
  doc["n"] = s.n();
  json strata = json::array();
  for (const auto& [k, p] : s.strata()) strata.push_back({{"key", write_key(k)}, {"presentation", write_presentation(p)}});
  doc["strata"] = std::move(strata);
  json edges = json::array();
  for (const auto& [k, e] : s.edges()) {
    json je{{"from", write_key(e.from)}, {"to", write_key(e.to)}};
    if (e.pullback) je["pullback"] = write_map(*e.pullback);
    if (e.pushforward) je["pushforward"] = write_map(*e.pushforward);
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);
  return render(doc);
}

namespace {

Sheet read_sheet(const json& levels, const std::string& path, std::string label, std::size_t depth,
                 const IncidenceStructure& s) {
  Sheet sheet{std::move(label), std::vector<LevelMap>(depth)};
  const json& arr = array_at(levels, path);
  for (std::size_t e = 0; e < arr.size(); ++e) {
    const std::string epath = path + "[" + std::to_string(e) + "]";
    StratumKey I = read_key(member(arr[e], "I", epath), epath + ".I");
    StratumKey J = read_key(member(arr[e], "J", epath), epath + ".J");
    if (I.size() != J.size()) throw ParseError("I and J must have the same size", epath);
    if (!s.has(I)) throw ParseError("stratum " + key_string(I) + " is absent", epath + ".I");
    if (!s.has(J)) throw ParseError("stratum " + key_string(J) + " is absent", epath + ".J");
    const int m = static_cast<int>(I.size());
    const int codim = read_small(member(arr[e], "codim", epath), epath + ".codim");
    if (codim != s.n() - m)
      throw ParseError("codim must be " + std::to_string(s.n() - m) + " at level " + std::to_string(m), epath + ".codim");
    std::vector<Integer> coeffs = read_integers(member(arr[e], "coeffs", epath), epath + ".coeffs");
    const PresentationPtr p = s.product(I, J);
    if (coeffs.size() != p->rank(codim))
      throw ParseError("expected " + std::to_string(p->rank(codim)) + " coefficients", epath + ".coeffs");
    if (depth && static_cast<std::size_t>(m) > depth)
      throw ParseError("entry lies above the declared depth " + std::to_string(depth), epath);
    if (sheet.levels.size() < static_cast<std::size_t>(m)) sheet.levels.resize(m);
    PairKey key{std::move(I), std::move(J)};
    if (sheet.levels[m - 1].count(key)) throw ParseError("entry given twice", epath);
    sheet.levels[m - 1].emplace(std::move(key), ChowClass(p, codim, std::move(coeffs)));
  }
  if (sheet.levels.empty()) sheet.levels.resize(1);
  return sheet;
}

}  // namespace

CorrespondenceFamily parse_family(const std::string& text, const IncidenceStructure& s) {
  const json doc = parse_json(text);
  check_format(doc, kFamilyFormat);
  CorrespondenceFamily f;
  if (!doc.contains("sheets")) {
    f.sheets.push_back(read_sheet(member(doc, "levels", ""), "levels", "family", 0, s));
    return f;
  }
  const json& sheets = array_at(doc["sheets"], "sheets");
  for (std::size_t i = 0; i < sheets.size(); ++i) {
    const std::string path = "sheets[" + std::to_string(i) + "]";
    std::string label = sheets[i].contains("label") ? read_string(sheets[i]["label"], path + ".label")
                                                     : "sheet" + std::to_string(i + 1);
    std::size_t depth = 0;
    if (sheets[i].contains("depth")) {
      const int d = read_small(sheets[i]["depth"], path + ".depth");
      if (d < 1) throw ParseError("depth must be at least 1", path + ".depth");
      depth = static_cast<std::size_t>(d);
    }
    f.sheets.push_back(read_sheet(member(sheets[i], "levels", path), path + ".levels", std::move(label), depth, s));
  }
  return f;
}

std::string write_family(const CorrespondenceFamily& f) {
  json doc;
  doc["format"] = kFamilyFormat;
  json sheets = json::array();
  for (const auto& sh : f.sheets) {
    json entries = json::array();
    for (const auto& lvl : sh.levels)
      for (const auto& [k, c] : lvl)
        entries.push_back({{"I", write_key(k.first)},
                           {"J", write_key(k.second)},
                           {"codim", c.codim()},
                           {"coeffs", write_integers(c.coeffs())}});
    sheets.push_back({{"label", sh.label}, {"depth", sh.levels.size()}, {"levels", std::move(entries)}});
  }
  doc["sheets"] = std::move(sheets);
  return render(doc);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string(), "file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace strata
