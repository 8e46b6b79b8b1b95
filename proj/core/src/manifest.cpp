#include "statsub/manifest.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "statsub/errors.hpp"

namespace statsub {

using json = nlohmann::ordered_json;

void Tolerances::scale(double k) {
  conjugation *= k;
  involution *= k;
  duality *= k;
  statistical *= k;
  spd *= k;
  identity *= k;
  oneill *= k;
  einstein *= k;
  spread *= k;
  band *= k;
  singular *= k;
  angle *= k;
  isometry *= k;
}

SubmersionSetup Manifest::submersion_setup() const {
  if (!target || !map)
    throw ValidationError("submersion analyses need both a target block and a map");
  SubmersionSetup setup{source, *target, *map};
  setup.validate();
  return setup;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

const json& expect_object(const json& j, const std::string& name) {
  if (!j.is_object()) fail("'" + name + "' must be a JSON object");
  return j;
}

double expect_number(const json& j, const std::string& name) {
  if (!j.is_number()) fail("'" + name + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail("'" + name + "' must be finite");
  return v;
}

std::string expect_string(const json& j, const std::string& name) {
  if (!j.is_string()) fail("'" + name + "' must be a string");
  return j.get<std::string>();
}

// Index lists in entry keys: "g_12" or "g_1_2", "G_612" or "G_6_1_2",
// 1-based in the manifest.
std::vector<int> parse_indices(const std::string& key, std::size_t skip, std::size_t count,
                               int dim) {
  std::vector<int> out;
  const std::string rest = key.substr(skip);
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : rest) {
    if (c == '_') {
      tokens.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  tokens.push_back(cur);
  if (tokens.size() == 1 && tokens[0].size() == count) {
    for (char c : tokens[0]) tokens.push_back(std::string(1, c));
    tokens.erase(tokens.begin());
  }
  if (tokens.size() != count) fail("entry key '" + key + "' needs " + std::to_string(count) +
                                   " indices like '" + key.substr(0, skip) + "1_2'");
  for (const std::string& t : tokens) {
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
      fail("entry key '" + key + "' has a non-numeric index");
    const int v = std::stoi(t);
    if (v < 1 || v > dim)
      fail("entry key '" + key + "' index " + std::to_string(v) + " is out of range for dimension " +
           std::to_string(dim));
    out.push_back(v - 1);
  }
  return out;
}

Chart parse_chart(const json& block, const std::string& where) {
  if (!block.contains("dimension")) fail("'" + where + "' needs a 'dimension'");
  if (!block["dimension"].is_number_integer()) fail("'" + where + ".dimension' must be an integer");
  const int d = block["dimension"].get<int>();
  if (d < 1) fail("'" + where + ".dimension' must be positive");
  Chart chart;
  if (block.contains("coordinates")) {
    const json& c = block["coordinates"];
    if (!c.is_array()) fail("'" + where + ".coordinates' must be an array of names");
    for (const json& e : c) chart.coordinates.push_back(expect_string(e, where + ".coordinates[]"));
    if (static_cast<int>(chart.coordinates.size()) != d)
      fail("'" + where + "' lists " + std::to_string(chart.coordinates.size()) +
           " coordinates for dimension " + std::to_string(d));
  } else {
    for (int i = 1; i <= d; ++i) chart.coordinates.push_back("x" + std::to_string(i));
  }
  chart.validate();
  return chart;
}

StatisticalStructure parse_structure(const json& block, const std::string& where,
                                     std::vector<int>* conventions) {
  StatisticalStructure s;
  s.chart = parse_chart(block, where);
  const int d = s.chart.dimension();

  if (block.contains("metric")) {
    const json& mj = expect_object(block["metric"], where + ".metric");
    std::map<std::pair<int, int>, Expression> entries;
    for (const auto& [key, value] : mj.items()) {
      if (key.rfind("g_", 0) != 0)
        fail("metric entry '" + key + "' must look like 'g_1_2' or 'g_12'");
      const std::vector<int> idx = parse_indices(key, 2, 2, d);
      entries[{idx[0], idx[1]}] =
          Expression::parse(expect_string(value, where + ".metric." + key), s.chart.coordinates);
    }
    s.metric = MetricField::from_entries(s.chart, entries);
  } else {
    s.metric = MetricField::identity(s.chart);
  }

  if (block.contains("connection")) {
    const json& cj = block["connection"];
    if (cj.is_string()) {
      if (cj.get<std::string>() != "levi-civita")
        fail("'" + where + ".connection' must be \"levi-civita\" or an object of entries");
      s.nabla = ConnectionField::levi_civita();
    } else {
      expect_object(cj, where + ".connection");
      std::map<std::tuple<int, int, int>, Expression> entries;
      for (const auto& [key, value] : cj.items()) {
        if (key.rfind("G_", 0) != 0)
          fail("connection entry '" + key + "' must look like 'G_k_i_j'");
        const std::vector<int> idx = parse_indices(key, 2, 3, d);
        entries[{idx[0], idx[1], idx[2]}] = Expression::parse(
            expect_string(value, where + ".connection." + key), s.chart.coordinates);
      }
      s.nabla = ConnectionField::explicit_coeffs(s.chart, entries);
    }
  } else {
    s.nabla = ConnectionField::levi_civita();
  }

  if (block.contains("curvature_convention")) {
    const json& cc = block["curvature_convention"];
    std::vector<int> parsed;
    if (cc.is_number_integer()) {
      const int v = cc.get<int>();
      if (v != 1 && v != -1) fail("'curvature_convention' must be 1, -1, or \"both\"");
      parsed = {v};
    } else if (cc.is_string()) {
      const std::string v = cc.get<std::string>();
      if (v == "both")
        parsed = {+1, -1};
      else if (v == "+1" || v == "1")
        parsed = {+1};
      else if (v == "-1")
        parsed = {-1};
      else
        fail("'curvature_convention' must be 1, -1, or \"both\"");
    } else {
      fail("'curvature_convention' must be 1, -1, or \"both\"");
    }
    if (conventions) *conventions = parsed;
    s.convention = parsed.front();
  }
  return s;
}

Potential parse_potential(const json& pj, const Chart& chart) {
  expect_object(pj, "soliton.potential");
  if (pj.size() != 1)
    fail("'soliton.potential' must hold exactly one of 'vector', 'gradient', 'conformal'");
  Potential pot;
  const auto item = pj.items().begin();
  const std::string& kind = item.key();
  const json& value = item.value();
  auto parse_components = [&](const std::string& label) {
    if (!value.is_array()) fail("'soliton.potential." + label + "' must be an expression array");
    std::vector<Expression> comps;
    for (const json& e : value)
      comps.push_back(Expression::parse(expect_string(e, "soliton.potential." + label + "[]"),
                                        chart.coordinates));
    if (static_cast<int>(comps.size()) != chart.dimension())
      fail("'soliton.potential." + label + "' needs one component per source coordinate");
    return comps;
  };
  if (kind == "vector") {
    pot.kind = PotentialKind::Vector;
    pot.components = parse_components("vector");
  } else if (kind == "gradient") {
    pot.kind = PotentialKind::Gradient;
    pot.scalar =
        Expression::parse(expect_string(value, "soliton.potential.gradient"), chart.coordinates);
  } else if (kind == "conformal") {
    pot.kind = PotentialKind::Conformal;
    pot.components = parse_components("conformal");
  } else {
    fail("unknown potential kind '" + kind + "'");
  }
  return pot;
}

SolitonSpec parse_soliton(const json& block, const Chart& chart, bool has_submersion) {
  SolitonSpec spec;
  expect_object(block, "soliton");
  if (!block.contains("rho")) fail("'soliton' needs 'rho'");
  spec.rho = expect_number(block["rho"], "soliton.rho");
  if (block.contains("lambda")) {
    const json& lj = block["lambda"];
    if (lj.is_string()) {
      if (lj.get<std::string>() != "solve") fail("'soliton.lambda' must be a number or \"solve\"");
      spec.solve_lambda = true;
    } else {
      spec.lambda = expect_number(lj, "soliton.lambda");
      spec.solve_lambda = false;
    }
  }
  if (!block.contains("potential"))
    fail("'soliton' needs a 'potential' (use \"none\" for a zero potential)");
  const json& pj = block["potential"];
  if (pj.is_string()) {
    if (pj.get<std::string>() != "none")
      fail("'soliton.potential' must be \"none\" or an object");
  } else {
    spec.potential = parse_potential(pj, chart);
  }
  if (block.contains("restriction")) {
    spec.restriction = expect_string(block["restriction"], "soliton.restriction");
    if (spec.restriction != "total" && spec.restriction != "fiber" && spec.restriction != "base")
      fail("'soliton.restriction' must be one of \"total\", \"fiber\", \"base\"");
    if (spec.restriction != "total" && !has_submersion)
      fail("'soliton.restriction' = \"" + spec.restriction + "\" needs a submersion block");
  }
  return spec;
}

EvaluationSpec parse_evaluation(const json* block, int dim) {
  EvaluationSpec ev;
  ev.box.assign(dim, {-1.0, 1.0});
  if (block) {
    expect_object(*block, "evaluation");
    if (block->contains("points")) {
      const json& pts = (*block)["points"];
      if (!pts.is_array()) fail("'evaluation.points' must be an array of points");
      for (const json& p : pts) {
        if (!p.is_array() || static_cast<int>(p.size()) != dim)
          fail("every entry of 'evaluation.points' must list " + std::to_string(dim) +
               " coordinates");
        std::vector<double> x;
        for (const json& c : p) x.push_back(expect_number(c, "evaluation.points[][]"));
        ev.points.push_back(std::move(x));
      }
    }
    if (block->contains("random")) {
      const json& rj = expect_object((*block)["random"], "evaluation.random");
      if (rj.contains("count")) {
        if (!rj["count"].is_number_integer() || rj["count"].get<int>() < 0)
          fail("'evaluation.random.count' must be a non-negative integer");
        ev.random_count = rj["count"].get<int>();
      }
      if (rj.contains("seed")) {
        if (!rj["seed"].is_number_unsigned() && !rj["seed"].is_number_integer())
          fail("'evaluation.random.seed' must be an integer");
        ev.seed = rj["seed"].get<std::uint64_t>();
      }
      if (rj.contains("box")) {
        const json& bj = rj["box"];
        auto parse_range = [&](const json& r) -> std::pair<double, double> {
          if (!r.is_array() || r.size() != 2) fail("'box' ranges must be [low, high]");
          const double lo = expect_number(r[0], "box low");
          const double hi = expect_number(r[1], "box high");
          if (!(lo < hi)) fail("'box' range needs low < high");
          return {lo, hi};
        };
        if (bj.is_array() && bj.size() == 2 && bj[0].is_number()) {
          ev.box.assign(dim, parse_range(bj));
        } else if (bj.is_array()) {
          if (static_cast<int>(bj.size()) != dim)
            fail("'evaluation.random.box' needs one range per coordinate");
          ev.box.clear();
          for (const json& r : bj) ev.box.push_back(parse_range(r));
        } else {
          fail("'evaluation.random.box' must be [low, high] or an array of ranges");
        }
      }
    }
  }
  if (ev.points.empty() && ev.random_count == 0)
    ev.points.push_back(std::vector<double>(dim, 0.0));
  return ev;
}

Tolerances parse_tolerances(const json* block) {
  Tolerances tol;
  if (!block) return tol;
  expect_object(*block, "tolerances");
  for (const auto& [key, value] : block->items()) {
    const double v = expect_number(value, "tolerances." + key);
    if (v <= 0.0) fail("'tolerances." + key + "' must be positive");
    if (key == "conjugation")
      tol.conjugation = v;
    else if (key == "involution")
      tol.involution = v;
    else if (key == "duality")
      tol.duality = v;
    else if (key == "statistical")
      tol.statistical = v;
    else if (key == "spd")
      tol.spd = v;
    else if (key == "identity")
      tol.identity = v;
    else if (key == "oneill")
      tol.oneill = v;
    else if (key == "einstein")
      tol.einstein = v;
    else if (key == "spread")
      tol.spread = v;
    else if (key == "band")
      tol.band = v;
    else if (key == "singular")
      tol.singular = v;
    else if (key == "angle")
      tol.angle = v;
    else if (key == "isometry")
      tol.isometry = v;
    else
      fail("unknown tolerance '" + key + "'");
  }
  return tol;
}

}  // namespace

namespace {

Manifest build_manifest(const json& j);

}  // namespace

Manifest load_manifest_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  try {
    return build_manifest(j);
  } catch (const ValidationError&) {
    throw;
  } catch (const SyntaxError& e) {
    throw ValidationError(std::string("bad expression in manifest: ") + e.what());
  } catch (const UnknownIdentifier& e) {
    throw ValidationError(std::string("bad expression in manifest: ") + e.what());
  } catch (const ArityError& e) {
    throw ValidationError(std::string("bad expression in manifest: ") + e.what());
  }
}

namespace {

Manifest build_manifest(const json& j) {
  if (!j.is_object()) fail("manifest must be a JSON object");
  if (!j.contains("source")) fail("manifest needs a 'source' block");

  Manifest man;
  if (j.contains("name")) man.name = expect_string(j["name"], "name");
  man.source = parse_structure(expect_object(j["source"], "source"), "source", &man.conventions);

  if (j.contains("target"))
    man.target = parse_structure(expect_object(j["target"], "target"), "target", nullptr);

  if (j.contains("submersion")) {
    const json& sj = expect_object(j["submersion"], "submersion");
    if (!man.target) fail("a 'submersion' block needs a 'target' block");
    if (!sj.contains("map") || !sj["map"].is_array())
      fail("'submersion' needs a 'map' array of expressions");
    std::vector<Expression> comps;
    for (const json& e : sj["map"])
      comps.push_back(
          Expression::parse(expect_string(e, "submersion.map[]"), man.source.chart.coordinates));
    man.map = SubmersionMap::create(man.source.chart, man.target->chart, std::move(comps));
    man.submersion_setup();  // dimension consistency
  }

  if (j.contains("soliton"))
    man.soliton = parse_soliton(j["soliton"], man.source.chart, man.map.has_value());

  const json* ev = j.contains("evaluation") ? &j["evaluation"] : nullptr;
  man.evaluation = parse_evaluation(ev, man.source.dimension());

  const json* tols = j.contains("tolerances") ? &j["tolerances"] : nullptr;
  man.tolerances = parse_tolerances(tols);

  if (j.contains("claims")) {
    expect_object(j["claims"], "claims");
    man.claims_text = j["claims"].dump();
  }
  return man;
}

}  // namespace

Manifest load_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_manifest_text(buf.str());
}

}  // namespace statsub
