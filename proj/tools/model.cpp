#include "model.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "varjet/parse.hpp"

namespace varjet::cli {

namespace {

struct Entry {
  std::string key, value;
  int line = 0;
};
struct Section {
  std::string name, arg;
  std::vector<Entry> entries;
  int line = 0;

  const std::string* find(const std::string& key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e.value;
    return nullptr;
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::vector<Section> read_sections(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) throw model_error("cannot read model file: " + file_path);
  std::vector<Section> sections;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw model_error("line " + std::to_string(line_no) +
                          ": unterminated section header");
      std::vector<std::string> words =
          split_words(line.substr(1, line.size() - 2));
      if (words.empty())
        throw model_error("line " + std::to_string(line_no) +
                          ": empty section header");
      Section s;
      s.name = words[0];
      if (words.size() > 1) s.arg = words[1];
      if (words.size() > 2)
        throw model_error("line " + std::to_string(line_no) +
                          ": too many tokens in section header");
      s.line = line_no;
      sections.push_back(std::move(s));
      continue;
    }
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw model_error("line " + std::to_string(line_no) +
                        ": expected 'key: value'");
    if (sections.empty())
      throw model_error("line " + std::to_string(line_no) +
                        ": entry outside any [section]");
    sections.back().entries.push_back(Entry{
        trim(line.substr(0, colon)), trim(line.substr(colon + 1)), line_no});
  }
  return sections;
}

Expr parse_entry(const std::string& text, const BundleSignature& sig,
                 int line_no) {
  try {
    return parse_expression(text, sig);
  } catch (const parse_error& e) {
    throw model_error("line " + std::to_string(line_no) + ", column " +
                      std::to_string(e.position + 1) + ": " + e.what());
  }
}

int entry_line(const Section& s, const std::string& key) {
  for (const auto& e : s.entries)
    if (e.key == key) return e.line;
  return s.line;
}

GroupTag parse_group(const std::string& name, int line_no) {
  if (name == "U1") return GroupTag::U1;
  if (name == "SU2") return GroupTag::SU2;
  if (name == "GL") return GroupTag::GL;
  throw model_error("line " + std::to_string(line_no) +
                    ": unknown group '" + name + "' (expected U1, SU2, GL)");
}

ConnectionForm parse_connection(const Section& s,
                                const BundleSignature& base_sig) {
  const std::string* group = s.find("group");
  if (!group)
    throw model_error("line " + std::to_string(s.line) +
                      ": [connection] requires 'group:'");
  ConnectionForm A;
  A.group = parse_group(*group, entry_line(s, "group"));
  A.base_dim = base_sig.base_dim();
  A.matrix_dim = A.group == GroupTag::SU2 ? 2 : 1;
  if (A.group == GroupTag::GL) {
    if (const std::string* size = s.find("size"))
      A.matrix_dim = std::stoi(*size);
    if (A.matrix_dim < 1)
      throw model_error("line " + std::to_string(s.line) +
                        ": connection size must be positive");
  }
  A.components.assign(
      size_t(A.base_dim),
      std::vector<std::vector<std::pair<Expr, Expr>>>(
          size_t(A.matrix_dim),
          std::vector<std::pair<Expr, Expr>>(size_t(A.matrix_dim))));
  // entries: A_<coord>_re / A_<coord>_im for 1x1, A_<coord>_<i><j>_re
  // for matrices
  for (const auto& e : s.entries) {
    if (e.key == "group" || e.key == "size") continue;
    std::vector<std::string> parts;
    std::istringstream in(e.key);
    std::string p;
    while (std::getline(in, p, '_')) parts.push_back(p);
    bool matrix_entry = A.matrix_dim > 1;
    size_t expect = matrix_entry ? 4 : 3;
    if (parts.size() != expect || parts[0] != "A" ||
        (parts.back() != "re" && parts.back() != "im"))
      throw model_error("line " + std::to_string(e.line) +
                        ": bad connection entry key '" + e.key + "'");
    std::optional<int> mu = base_sig.base_index(parts[1]);
    if (!mu)
      throw model_error("line " + std::to_string(e.line) +
                        ": unknown base coordinate '" + parts[1] + "'");
    int i = 0, j = 0;
    if (matrix_entry) {
      if (parts[2].size() != 2 || !std::isdigit(parts[2][0]) ||
          !std::isdigit(parts[2][1]))
        throw model_error("line " + std::to_string(e.line) +
                          ": bad matrix index in '" + e.key + "'");
      i = parts[2][0] - '0';
      j = parts[2][1] - '0';
      if (i >= A.matrix_dim || j >= A.matrix_dim)
        throw model_error("line " + std::to_string(e.line) +
                          ": matrix index out of range in '" + e.key + "'");
    }
    Expr value = parse_entry(e.value, base_sig, e.line);
    auto& slot = A.components[size_t(*mu)][size_t(i)][size_t(j)];
    (parts.back() == "re" ? slot.first : slot.second) = value;
  }
  A.validate();
  return A;
}

Path parse_path(const Section& s, const BundleSignature& sig) {
  BundleSignature param({"s"}, {});
  std::vector<Expr> comps(size_t(sig.base_dim()));
  std::vector<bool> seen(size_t(sig.base_dim()), false);
  for (const auto& e : s.entries) {
    std::optional<int> mu = sig.base_index(e.key);
    if (!mu)
      throw model_error("line " + std::to_string(e.line) +
                        ": unknown base coordinate '" + e.key + "'");
    comps[size_t(*mu)] = parse_entry(e.value, param, e.line);
    seen[size_t(*mu)] = true;
  }
  for (int mu = 0; mu < sig.base_dim(); ++mu)
    if (!seen[size_t(mu)])
      throw model_error("line " + std::to_string(s.line) +
                        ": [path] missing component '" + sig.base_name(mu) +
                        "'");
  return Path::from_components(std::move(comps));
}

}  // namespace

ModelFile load_model(const std::string& file_path) {
  std::vector<Section> sections = read_sections(file_path);
  const Section* sig_section = nullptr;
  for (const auto& s : sections)
    if (s.name == "signature") sig_section = &s;
  if (!sig_section) throw model_error("model has no [signature] section");

  const std::string* base = sig_section->find("base");
  if (!base)
    throw model_error("line " + std::to_string(sig_section->line) +
                      ": [signature] requires 'base:'");
  std::vector<std::string> fields, params;
  if (const std::string* f = sig_section->find("fields"))
    fields = split_words(*f);
  if (const std::string* p = sig_section->find("params"))
    params = split_words(*p);

  ModelFile model;
  try {
    model.signature = BundleSignature(split_words(*base), fields, params);
  } catch (const signature_error& e) {
    throw model_error("line " + std::to_string(sig_section->line) + ": " +
                      e.what());
  }
  const BundleSignature& sig = model.signature;
  BundleSignature base_only(sig.base_names(), {});

  for (const auto& s : sections) {
    if (s.name == "signature") continue;
    if (s.name == "lagrangian") {
      const std::string* d = s.find("density");
      if (!d)
        throw model_error("line " + std::to_string(s.line) +
                          ": [lagrangian] requires 'density:'");
      model.density = parse_entry(*d, sig, entry_line(s, "density"));
    } else if (s.name == "symmetry") {
      if (s.arg.empty())
        throw model_error("line " + std::to_string(s.line) +
                          ": [symmetry] needs a name");
      EvolutionaryField q = EvolutionaryField::zero(sig);
      for (const auto& e : s.entries) {
        if (e.key.rfind("Q_", 0) != 0)
          throw model_error("line " + std::to_string(e.line) +
                            ": symmetry entries must be 'Q_<field>:'");
        std::optional<int> a = sig.field_index(e.key.substr(2));
        if (!a)
          throw model_error("line " + std::to_string(e.line) +
                            ": unknown field '" + e.key.substr(2) + "'");
        q.characteristics[size_t(*a)] = parse_entry(e.value, sig, e.line);
      }
      model.symmetries.emplace_back(s.arg, std::move(q));
    } else if (s.name == "source") {
      SourceForm delta;
      delta.components.assign(size_t(sig.field_count()), Expr());
      for (const auto& e : s.entries) {
        if (e.key.rfind("Delta_", 0) != 0)
          throw model_error("line " + std::to_string(e.line) +
                            ": source entries must be 'Delta_<field>:'");
        std::optional<int> a = sig.field_index(e.key.substr(6));
        if (!a)
          throw model_error("line " + std::to_string(e.line) +
                            ": unknown field '" + e.key.substr(6) + "'");
        delta.components[size_t(*a)] = parse_entry(e.value, sig, e.line);
      }
      model.source = std::move(delta);
    } else if (s.name == "path") {
      try {
        model.path = parse_path(s, sig);
      } catch (const holonomy_error& e) {
        throw model_error("line " + std::to_string(s.line) + ": " + e.what());
      }
    } else if (s.name == "connection") {
      try {
        model.connection = parse_connection(s, base_only);
      } catch (const holonomy_error& e) {
        throw model_error("line " + std::to_string(s.line) + ": " + e.what());
      }
    } else {
      throw model_error("line " + std::to_string(s.line) +
                        ": unknown section [" + s.name + "]");
    }
  }
  return model;
}

}  // namespace varjet::cli
