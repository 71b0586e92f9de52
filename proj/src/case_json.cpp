#include "grflag/lie_data.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace grflag {

namespace {

using nlohmann::json;

// Parses an expression that may use v1 alongside the P(y) variables.
LaurentElement parse_v1_form(const GroupCase& c, const std::string& text) {
  std::vector<Variable> vars = c.py->variables();
  vars.push_back({"v1", 1, std::nullopt});
  auto ext = AlgebraPresentation::create(vars, CoefficientRing::integers());
  Element e = parse_element(ext, text);
  LaurentElement out(c.py, c.prime);
  for (const auto& [m, coef] : e.terms()) {
    Exponents mono(m.begin(), m.end() - 1);
    out = out + LaurentElement::monomial(c.py, c.prime, m.back(), mono, coef);
  }
  return out;
}

Exponents parse_monomial(const GroupCase& c, const std::string& text) {
  Element e = parse_element(c.py, text);
  if (e.terms().size() != 1 || e.terms().begin()->second != 1) throw CaseError("'" + text + "' is not a monomial");
  return e.terms().begin()->first;
}

}  // namespace

GroupCase parse_case_json(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CaseError(std::string("case file is not JSON: ") + e.what());
  }
  GroupCase c;
  try {
    c.name = j.at("name").get<std::string>();
    c.prime = j.at("prime").get<unsigned>();
    if (!is_prime(c.prime)) throw CaseError(c.name + ": prime " + std::to_string(c.prime) + " is not prime");
    c.rank = j.value("rank", 0);
    c.weyl_order = j.value("weyl_order", std::uint64_t{0});
    c.family = Family::Custom;
    std::vector<Variable> vars;
    for (const auto& v : j.at("py"))
      vars.push_back({v.at("label").get<std::string>(), v.at("chow_degree").get<int>(), v.at("trunc").get<int>()});
    c.py = AlgebraPresentation::create(vars, CoefficientRing::integers());
    c.py_mod_p = c.py->with_ring(CoefficientRing::prime_field(c.prime));
    for (const auto& x : j.value("x_gens", json::array()))
      c.x_gens.push_back({x.at("label").get<std::string>(), x.at("degree").get<int>()});
    for (const auto& q : j.value("q_table", json::array()))
      c.q_table.insert_or_assign({q.at("n").get<int>(), q.at("x").get<std::string>()},
                                 parse_element(c.py_mod_p, q.at("value").get<std::string>()));
    for (const auto& b : j.at("b_models")) {
      std::string label = b.at("label").get<std::string>();
      int w = b.at("weight").get<int>();
      Element value = parse_element(c.py, b.at("value").get<std::string>());
      LaurentElement form = b.contains("v1_form") ? parse_v1_form(c, b.at("v1_form").get<std::string>())
                                                  : LaurentElement::from_weighted(value, w, c.prime);
      BModel m{label, w, value, form, std::nullopt, {}};
      if (b.contains("transgresses")) m.transgresses = b.at("transgresses").get<std::string>();
      for (const auto& d : b.value("dropped_terms", json::array())) m.dropped_terms.push_back(d.get<std::string>());
      c.b_models.push_back(std::move(m));
    }
    c.y_top = parse_monomial(c, j.at("y_top").get<std::string>());
    const json ex = j.value("expected", json::object());
    if (ex.contains("torsion_exponent")) c.torsion_exponent = ex.at("torsion_exponent").get<int>();
    if (ex.contains("torsion_witness")) c.torsion_witness = ex.at("torsion_witness").get<std::string>();
    if (ex.contains("gr")) {
      const json& g = ex.at("gr");
      ExpectedGr gr;
      gr.exact = g.value("exact", true);
      for (const auto& cl : g.value("classes", json::array()))
        gr.classes.push_back({cl.at("weight").get<int>(), cl.at("factor").get<long>(), cl.at("rep").get<std::string>()});
      if (g.contains("min_mod_p_dim")) gr.min_mod_p_dim = g.at("min_mod_p_dim").get<long>();
      for (const auto& d : g.value("deeper", json::array())) gr.deeper_words.push_back(d.get<std::string>());
      gr.anchor = g.value("anchor", std::string("case file"));
      c.gr = gr;
    }
    if (ex.contains("image")) {
      std::string s = ex.at("image").get<std::string>();
      if (s == "full") c.image_shape = ImageShape::Full;
      else if (s == "missing_y2") c.image_shape = ImageShape::MissingY2Multiples;
      else throw CaseError(c.name + ": unknown image shape " + s);
    }
    if (ex.contains("rost")) c.rost = std::make_pair(ex.at("rost").at(0).get<int>(), ex.at("rost").at(1).get<unsigned>());
    if (ex.contains("presentation_file")) {
      std::string f = ex.at("presentation_file").get<std::string>();
      std::filesystem::path path = std::filesystem::path(f).is_absolute() ? std::filesystem::path(f)
                                                                           : std::filesystem::path(base_dir) / f;
      c.presentation_file = path.string();
      std::ifstream in(path);
      if (!in) throw CaseError(c.name + ": cannot read presentation file " + path.string());
      std::stringstream ss;
      ss << in.rdbuf();
      FlagIdeal fi;
      fi.ideal = parse_ideal_json(ss.str());
      json ij = json::parse(ss.str());
      std::map<std::string, Element> defs;
      for (const auto& d : ij.value("definitions", json::array()))
        defs.insert_or_assign(d.at("label").get<std::string>(), parse_element(fi.ideal.ring, d.at("expr").get<std::string>(), defs));
      for (const auto& b : ij.value("b_sequence", json::array()))
        fi.b_sequence.push_back(parse_element(fi.ideal.ring, b.get<std::string>(), defs));
      if (ij.contains("expected_dim")) fi.expected_dim = ij.at("expected_dim").get<std::uint64_t>();
      fi.anchor = "presentation file " + f;
      c.flag_ideal = fi;
    }
    for (const auto& n : j.value("notes", json::array())) c.notes.push_back(n.get<std::string>());
  } catch (const json::exception& e) {
    throw CaseError("malformed case file: " + std::string(e.what()));
  } catch (const ParseError& e) {
    throw CaseError("malformed case file: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw CaseError("malformed case file: " + std::string(e.what()));
  }
  auto errs = validate_case(c);
  if (!errs.empty()) throw CaseError(c.name + ": " + errs.front());
  return c;
}

GroupCase load_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CaseError("cannot read case file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case_json(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace grflag
