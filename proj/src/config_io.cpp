#include "eqlat/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "eqlat/detail/overloaded.hpp"
#include "eqlat/errors.hpp"
#include "json.hpp"

namespace eqlat {

using nlohmann::json;

namespace {

/// Walks one JSON object, remembering which keys were read so leftovers can
/// be rejected.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) fail(key(it.key()), "unknown key");
    }
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  const json& at(const std::string& k) {
    if (!j_.contains(k)) fail(key(k), "missing required key");
    used_.insert(k);
    return j_.at(k);
  }

  double number(const std::string& k) { return as_number(at(k), key(k)); }

  int integer(const std::string& k) {
    const json& v = at(k);
    if (!v.is_number_integer()) fail(key(k), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& k) {
    const json& v = at(k);
    if (!v.is_boolean()) fail(key(k), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& k) {
    const json& v = at(k);
    if (!v.is_string()) fail(key(k), "expected a string");
    return v.get<std::string>();
  }

  const json& array(const std::string& k) {
    const json& v = at(k);
    if (!v.is_array()) fail(key(k), "expected an array");
    return v;
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::string element(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

CoefficientFormula read_formula(const json& v, const std::string& path) {
  if (v.is_number()) return ConstantFormula{v.get<double>()};
  Section s(v, path);
  const std::string type = s.string("type");
  if (type == "constant") return ConstantFormula{s.number("value")};
  if (type == "affine_s") return AffineInS{s.number("intercept"), s.number("slope")};
  Section::fail(s.key("type"), "unknown formula '" + type + "' (constant | affine_s)");
}

MprFormula read_mpr(const json& v, const std::string& path) {
  if (v.is_number()) return ConstantFormula{v.get<double>()};
  Section s(v, path);
  const std::string type = s.string("type");
  if (type == "constant") return ConstantFormula{s.number("value")};
  if (type == "arctan") return ArctanMpr{s.number("scale"), s.number("offset")};
  Section::fail(s.key("type"), "unknown mpr formula '" + type + "' (constant | arctan)");
}

json write_formula(const CoefficientFormula& f) {
  return std::visit(detail::Overloaded{
                        [](const ConstantFormula& c) -> json { return c.value; },
                        [](const AffineInS& a) -> json {
                          return {{"type", "affine_s"}, {"intercept", a.intercept}, {"slope", a.slope}};
                        }},
                    f);
}

json write_mpr(const MprFormula& f) {
  return std::visit(detail::Overloaded{
                        [](const ConstantFormula& c) -> json { return c.value; },
                        [](const ArctanMpr& a) -> json {
                          return {{"type", "arctan"}, {"scale", a.scale}, {"offset", a.offset}};
                        }},
                    f);
}

Eigen::VectorXd read_vector(const json& v, const std::string& path) {
  if (!v.is_array()) Section::fail(path, "expected an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = Section::as_number(v[i], element(path, i));
  }
  return out;
}

RegimeChain read_chain(const json& v, const std::string& path) {
  Section s(v, path);
  RegimeChain chain;
  const json& labels = s.array("labels");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string()) Section::fail(element(s.key("labels"), i), "expected a string");
    chain.labels.push_back(labels[i].get<std::string>());
  }
  const auto n = static_cast<Eigen::Index>(chain.labels.size());
  const json& rows = s.array("transition");
  if (static_cast<Eigen::Index>(rows.size()) != n) {
    Section::fail(s.key("transition"), "expected one row per regime label");
  }
  chain.transition.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd row = read_vector(rows[i], element(s.key("transition"), i));
    if (row.size() != n) Section::fail(element(s.key("transition"), i), "row length mismatch");
    chain.transition.row(i) = row.transpose();
  }
  chain.initial = read_vector(s.at("initial"), s.key("initial"));
  chain.gamma = read_vector(s.at("gamma"), s.key("gamma"));
  if (chain.initial.size() != n || chain.gamma.size() != n) {
    Section::fail(path, "initial and gamma need one entry per regime label");
  }
  return chain;
}

json write_chain(const RegimeChain& c) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < c.transition.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < c.transition.cols(); ++j) row.push_back(c.transition(i, j));
    rows.push_back(row);
  }
  return {{"labels", c.labels},
          {"transition", rows},
          {"initial", std::vector<double>(c.initial.data(), c.initial.data() + c.initial.size())},
          {"gamma", std::vector<double>(c.gamma.data(), c.gamma.data() + c.gamma.size())}};
}

IncomeTerm read_income(const json& v, const std::string& path, const RegimeChain& chain) {
  Section s(v, path);
  const std::string type = s.string("type");
  if (type == "constant") return ConstantIncome{s.number("value")};
  if (type == "exp_affine_s") {
    ExpAffineIncome e{s.number("coef"), s.number("slope"), -1};
    if (s.has("time")) e.time = s.integer("time");
    return e;
  }
  if (type != "indicator") {
    Section::fail(s.key("type"), "unknown income term '" + type +
                                     "' (constant | exp_affine_s | indicator)");
  }
  IndicatorIncome ind;
  ind.coef = s.number("coef");
  ind.rate = s.number("rate");
  const json& shocks = s.array("shocks");
  for (std::size_t i = 0; i < shocks.size(); ++i) {
    Section c(shocks[i], element(s.key("shocks"), i));
    // Components are numbered from 1 in files, as in b^1, b^2, b^3.
    ind.shocks.push_back({c.integer("step"), c.integer("component") - 1, c.integer("sign")});
  }
  const json& regimes = s.array("regimes");
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    Section c(regimes[i], element(s.key("regimes"), i));
    const std::string label = c.string("state");
    int state = 0;
    try {
      state = chain.index_of(label);
    } catch (const ConfigError&) {
      throw ConfigError("config: " + c.key("state") + ": unknown regime label '" + label + "'",
                        "E_REGIME");
    }
    ind.regimes.push_back({c.integer("time"), state});
  }
  return ind;
}

json write_income(const IncomeTerm& t, const RegimeChain& chain) {
  return std::visit(
      detail::Overloaded{
          [](const ConstantIncome& c) -> json { return {{"type", "constant"}, {"value", c.value}}; },
          [](const ExpAffineIncome& e) -> json {
            json j = {{"type", "exp_affine_s"}, {"coef", e.coef}, {"slope", e.slope}};
            if (e.time >= 0) j["time"] = e.time;
            return j;
          },
          [&](const IndicatorIncome& ind) -> json {
            json shocks = json::array();
            for (const auto& c : ind.shocks) {
              shocks.push_back({{"step", c.step}, {"component", c.component + 1}, {"sign", c.sign}});
            }
            json regimes = json::array();
            for (const auto& c : ind.regimes) {
              regimes.push_back({{"time", c.time}, {"state", chain.labels.at(c.state)}});
            }
            return {{"type", "indicator"}, {"coef", ind.coef}, {"rate", ind.rate},
                    {"shocks", shocks}, {"regimes", regimes}};
          }},
      t);
}

PayoffSpec read_payoff(const json& v, const std::string& path) {
  Section s(v, path);
  const std::string type = s.string("type");
  if (type == "call") return CallPayoff{s.number("strike")};
  if (type == "digital") return DigitalPayoff{};
  if (type == "constant") return ConstantPayoff{s.number("value")};
  Section::fail(s.key("type"), "unknown payoff '" + type + "' (call | digital | constant)");
}

json write_payoff(const PayoffSpec& p) {
  return std::visit(
      detail::Overloaded{
          [](const CallPayoff& c) -> json { return {{"type", "call"}, {"strike", c.strike}}; },
          [](const DigitalPayoff&) -> json { return {{"type", "digital"}}; },
          [](const ConstantPayoff& c) -> json { return {{"type", "constant"}, {"value", c.value}}; }},
      p);
}

std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + position(text, e.byte == 0 ? 0 : e.byte - 1) +
                          ": malformed JSON",
                      "E_PARSE");
  }

  ScenarioConfig c;
  {
    Section s(root, "");
    if (s.has("name")) c.name = s.string("name");
    {
      Section g(s.at("grid"), "grid");
      const int steps = g.integer("steps");
      const double h = g.number("h");
      c.grid = TimeGrid(steps, h);
    }
    c.dim = s.integer("dim");
    {
      Section i(s.at("initial"), "initial");
      c.initial = {i.number("c"), i.number("s")};
    }
    {
      Section k(s.at("coefficients"), "coefficients");
      c.coefficients.muC = read_formula(k.at("mu_c"), k.key("mu_c"));
      c.coefficients.sigmaC = read_formula(k.at("sigma_c"), k.key("sigma_c"));
      c.coefficients.muS = read_formula(k.at("mu_s"), k.key("mu_s"));
      c.coefficients.sigmaS = read_formula(k.at("sigma_s"), k.key("sigma_s"));
      c.coefficients.rho = k.number("rho");
      if (k.has("mpr")) c.coefficients.mprOverride = read_mpr(k.at("mpr"), k.key("mpr"));
    }
    c.chain = read_chain(s.at("regimes"), "regimes");
    c.income.terms.clear();
    const json& income = s.array("income");
    for (std::size_t i = 0; i < income.size(); ++i) {
      c.income.terms.push_back(read_income(income[i], element("income", i), c.chain));
    }
    c.dividend.phi = read_formula(s.at("dividend"), "dividend");
    c.payoff = read_payoff(s.at("payoff"), "payoff");
    if (s.has("run")) {
      Section r(s.at("run"), "run");
      c.run = {r.boolean("consistent"), r.boolean("inconsistent"), r.boolean("verify")};
    }
    if (s.has("path_cap")) {
      const json& v = s.at("path_cap");
      if (!v.is_number_unsigned()) Section::fail("path_cap", "expected a positive integer");
      c.pathCap = v.get<std::uint64_t>();
    }
  }
  c.validate();
  return c;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'", "E_IO");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string serialize_config(const ScenarioConfig& c) {
  json coef = {{"mu_c", write_formula(c.coefficients.muC)},
               {"sigma_c", write_formula(c.coefficients.sigmaC)},
               {"mu_s", write_formula(c.coefficients.muS)},
               {"sigma_s", write_formula(c.coefficients.sigmaS)},
               {"rho", c.coefficients.rho}};
  if (c.coefficients.mprOverride) coef["mpr"] = write_mpr(*c.coefficients.mprOverride);
  json income = json::array();
  for (const auto& t : c.income.terms) income.push_back(write_income(t, c.chain));

  json root = {{"name", c.name},
               {"grid", {{"steps", c.grid.steps()}, {"h", c.grid.h()}}},
               {"dim", c.dim},
               {"initial", {{"c", c.initial.c}, {"s", c.initial.s}}},
               {"coefficients", coef},
               {"regimes", write_chain(c.chain)},
               {"income", income},
               {"dividend", write_formula(c.dividend.phi)},
               {"payoff", write_payoff(c.payoff)},
               {"run", {{"consistent", c.run.consistent},
                        {"inconsistent", c.run.inconsistent},
                        {"verify", c.run.verify}}},
               {"path_cap", c.pathCap}};
  return root.dump(2) + "\n";
}

}  // namespace eqlat
