#include "khdetect/report.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "khdetect/error.hpp"

namespace khdetect::report {

using nlohmann::ordered_json;

namespace {

ordered_json l_table(const khovanov::LGradedRanks& r) {
  ordered_json j = ordered_json::object();
  for (const auto& [l, v] : r.entries()) j[std::to_string(l)] = v;
  return j;
}

}  // namespace

std::string kh_json(const KhReport& r) {
  ordered_json j;
  j["input"] = r.input;
  j["field"] = r.field;
  j["reduced"] = r.reduced;
  j["basepoint"] = r.basepoint ? ordered_json(*r.basepoint) : ordered_json(nullptr);
  ordered_json bi = ordered_json::array();
  for (const auto& [hq, v] : r.ranks.entries()) bi.push_back({{"h", hq.first}, {"q", hq.second}, {"rank", v}});
  j["bigraded"] = bi;
  j["l_graded"] = l_table(khovanov::l_collapse(r.ranks));
  j["total"] = r.ranks.total();
  return j.dump(2);
}

std::string kh_text(const KhReport& r) {
  std::ostringstream out;
  out << "Kh over " << r.field << (r.reduced ? " (reduced)" : "") << "\n";
  out << "  h    q  rank\n";
  for (const auto& [hq, v] : r.ranks.entries()) {
    out << std::setw(3) << hq.first << std::setw(5) << hq.second << std::setw(6) << v << "\n";
  }
  out << "l-graded:";
  const khovanov::LGradedRanks l_ranks = khovanov::l_collapse(r.ranks);
  for (const auto& [l, v] : l_ranks.entries()) out << " " << l << ":" << v;
  out << "\ntotal " << r.ranks.total() << "\n";
  return out.str();
}

std::string alex_json(const AlexReport& r) {
  ordered_json j;
  j["input"] = r.input;
  j["grid"] = r.grid;
  j["components"] = r.components;
  j["euler_characteristic_doubled"] = r.chi.to_string();
  j["alexander"] = r.delta.to_string();
  if (r.torres) {
    j["torres"] = {{"knot", r.torres->knot},
                   {"l", r.torres->l},
                   {"knot_component", r.torres->knot_component},
                   {"verdict", r.torres->pass ? "PASS" : "FAIL"}};
  } else {
    j["torres"] = nullptr;
  }
  return j.dump(2);
}

std::string alex_text(const AlexReport& r) {
  std::ostringstream out;
  out << "grid: " << r.grid << "\n";
  out << "hat Euler characteristic (doubled exponents): " << r.chi.to_string() << "\n";
  out << "Alexander polynomial: " << r.delta.to_string() << "\n";
  if (r.delta.vars() == 2) out << "Delta(x,1): " << r.delta.substitute_one(1).to_string() << "\n";
  if (r.torres) {
    out << "Torres (" << r.torres->knot << ", l=" << r.torres->l << ", knot component " << r.torres->knot_component
        << "): " << (r.torres->pass ? "PASS" : "FAIL") << "\n";
  }
  return out.str();
}

namespace {

struct HflSummary {
  std::size_t total = 0;
  long chi = 0;
  struct Comp {
    std::map<int, std::size_t> dims;
    std::map<int, long> chi;
    gridfloer::Slice top;
  };
  std::vector<Comp> comps;
};

HflSummary summarize(const gridfloer::GradedDims& hat) {
  HflSummary s;
  int ncomp = hat.empty() ? 0 : static_cast<int>(hat.begin()->first.alex.size());
  for (const auto& kv : hat) s.total += kv.second;
  s.chi = gridfloer::total_chi_bound(hat);
  for (int c = 0; c < ncomp; ++c) {
    s.comps.push_back({gridfloer::slice_dims(hat, c), gridfloer::slice_chi_bounds(hat, c), gridfloer::top_slice(hat, c)});
  }
  return s;
}

long at_or_zero(const std::map<int, long>& m, int k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

std::string hfl_json(const HflReport& r) {
  const HflSummary s = summarize(r.hat);
  ordered_json j;
  j["input"] = r.input;
  j["grid"] = r.grid;
  ordered_json entries = ordered_json::array();
  for (const auto& [k, v] : r.hat) entries.push_back({{"maslov", k.maslov}, {"alex_doubled", k.alex}, {"dim", v}});
  j["hat"] = entries;
  j["total_f2"] = s.total;
  j["chi_norm"] = s.chi;
  j["q_certified_total"] = static_cast<long>(s.total) == s.chi;
  ordered_json comps = ordered_json::array();
  for (std::size_t c = 0; c < s.comps.size(); ++c) {
    const auto& cc = s.comps[c];
    ordered_json slices = ordered_json::array();
    for (const auto& [a, d] : cc.dims) {
      const long lo = at_or_zero(cc.chi, a);
      slices.push_back({{"alex_doubled", a}, {"dim_f2", d}, {"chi_bound", lo}, {"q_certified", lo == static_cast<long>(d)}});
    }
    const long top_lo = at_or_zero(cc.chi, cc.top.top);
    comps.push_back({{"component", c},
                     {"slices", slices},
                     {"top", {{"alex_doubled", cc.top.top},
                              {"dim_f2", cc.top.dim},
                              {"chi_bound", top_lo},
                              {"q_certified", top_lo == static_cast<long>(cc.top.dim)}}}});
  }
  j["components"] = comps;
  return j.dump(2);
}

std::string hfl_text(const HflReport& r) {
  const HflSummary s = summarize(r.hat);
  std::ostringstream out;
  out << "grid: " << r.grid << "\n";
  out << "hat HFL over F2:";
  for (const auto& [k, v] : r.hat) {
    out << " (M=" << k.maslov << ", 2A=";
    for (std::size_t i = 0; i < k.alex.size(); ++i) out << (i ? "," : "") << k.alex[i];
    out << ")x" << v;
  }
  out << "\ntotal F2 dim " << s.total << ", Euler characteristic norm " << s.chi << ": "
      << (static_cast<long>(s.total) == s.chi ? "Q dimension certified" : "gap, Q dimension not certified") << "\n";
  for (std::size_t c = 0; c < s.comps.size(); ++c) {
    const auto& cc = s.comps[c];
    out << "component " << c << " slices (2A: F2 dim / chi bound):";
    for (const auto& [a, d] : cc.dims) out << " " << a << ": " << d << "/" << at_or_zero(cc.chi, a);
    const long top_lo = at_or_zero(cc.chi, cc.top.top);
    out << "\n  top 2A=" << cc.top.top << " dim " << cc.top.dim << " "
        << (top_lo == static_cast<long>(cc.top.dim) ? "(Q-certified)" : "(F2 only, chi bound " + std::to_string(top_lo) + ")")
        << "\n";
  }
  return out.str();
}

std::string certificate_json(const detect::Certificate& c) {
  ordered_json j;
  j["input"] = c.input;
  j["grid"] = c.grid ? ordered_json(*c.grid) : ordered_json(nullptr);
  j["grid_source"] = c.grid_source;
  ordered_json steps = ordered_json::array();
  for (const auto& s : c.steps) {
    steps.push_back({{"step", s.step},
                     {"anchor", s.anchor},
                     {"inputs_hash", s.inputs_hash},
                     {"verdict", s.verdict},
                     {"detail", s.detail}});
  }
  j["steps"] = steps;
  j["final"] = {{"verdict", detect::verdict_name(c.final)},
                {"reason", c.reason},
                {"mirror", c.mirror},
                {"f2_only", c.f2_only}};
  return j.dump(2);
}

std::string certificate_text(const detect::Certificate& c) {
  std::ostringstream out;
  out << "input " << c.input << "\n";
  for (const auto& s : c.steps) {
    out << "  [" << std::setw(7) << std::left << s.verdict << "] " << std::setw(17) << s.step << std::right << " "
        << s.detail << "\n";
  }
  out << "verdict " << detect::verdict_name(c.final);
  if (!c.reason.empty()) out << " (" << c.reason << ")";
  out << "\n";
  return out.str();
}

detect::Certificate certificate_from_json(std::string_view text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    detect::Certificate c;
    c.input = j.at("input").get<std::string>();
    if (!j.at("grid").is_null()) c.grid = j.at("grid").get<std::string>();
    c.grid_source = j.at("grid_source").get<std::string>();
    for (const auto& s : j.at("steps")) {
      c.steps.push_back({s.at("step").get<std::string>(), s.at("anchor").get<std::string>(),
                         s.at("inputs_hash").get<std::string>(), s.at("verdict").get<std::string>(),
                         s.at("detail").get<std::string>()});
    }
    const auto& f = j.at("final");
    const std::string v = f.at("verdict").get<std::string>();
    bool known = false;
    for (auto cand : {detect::Verdict::MatchesL1, detect::Verdict::MatchesL2, detect::Verdict::RuledOut,
                      detect::Verdict::Inconclusive}) {
      if (detect::verdict_name(cand) == v) {
        c.final = cand;
        known = true;
      }
    }
    if (!known) throw Error(ErrorCode::SchemaViolation, "unknown verdict " + v);
    c.reason = f.at("reason").get<std::string>();
    c.mirror = f.at("mirror").get<bool>();
    c.f2_only = f.at("f2_only").get<bool>();
    return c;
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, e.what());
  }
}

std::string verify_json(const corpus::VerifyReport& r) {
  ordered_json j;
  ordered_json items = ordered_json::array();
  for (const auto& i : r.items) {
    items.push_back({{"entry", i.entry}, {"check", i.check}, {"pass", i.pass}, {"detail", i.detail}});
  }
  j["items"] = items;
  j["ok"] = r.ok();
  return j.dump(2);
}

std::string verify_text(const corpus::VerifyReport& r) {
  std::ostringstream out;
  for (const auto& i : r.items) {
    out << (i.pass ? "PASS " : "FAIL ") << i.entry << " " << i.check << ": " << i.detail << "\n";
  }
  out << (r.ok() ? "corpus OK" : "corpus FAILED") << "\n";
  return out.str();
}

}  // namespace khdetect::report
