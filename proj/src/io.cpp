#include "crnf/io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "crnf/errors.hpp"
#include "crnf/model.hpp"
#include "crnf/reconstruct.hpp"

namespace crnf {

namespace {

mpq_class rat_parse_io(const std::string& s) {
  try {
    return rat_parse(s);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

int int_field(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number_integer())
    throw ParseError(std::string("expected integer field \"") + key + "\"");
  const long long v = obj.at(key).get<long long>();
  if (v < 0 || v > 30000)
    throw ParseError(std::string("field \"") + key + "\" out of range");
  return static_cast<int>(v);
}

std::string str_field(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_string())
    throw ParseError(std::string("expected string field \"") + key + "\"");
  return obj.at(key).get<std::string>();
}

bool bool_field(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_boolean())
    throw ParseError(std::string("expected boolean field \"") + key + "\"");
  return obj.at(key).get<bool>();
}

void require_keys(const Json& obj, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) throw ParseError("expected a JSON object");
  for (const char* k : required)
    if (!obj.contains(k))
      throw ParseError(std::string("missing field \"") + k + "\"");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& k = it.key();
    const bool known =
        std::any_of(required.begin(), required.end(),
                    [&](const char* r) { return k == r; }) ||
        std::any_of(optional.begin(), optional.end(),
                    [&](const char* o) { return k == o; });
    if (!known) throw ParseError("unknown field \"" + k + "\"");
  }
}

Json serialize_trunc(Trunc tr) {
  Json j = Json::object();
  j["weight"] = tr.weight;
  j["zeta_degree"] = tr.zeta;
  return j;
}

Trunc parse_trunc(const Json& j) {
  require_keys(j, {"weight", "zeta_degree"});
  return Trunc(int_field(j, "weight"), int_field(j, "zeta_degree"));
}

std::string form_str(FormTag f) {
  switch (f) {
    case FormTag::raw_germ: return "raw_germ";
    case FormTag::prenormalized: return "prenormalized";
    case FormTag::perturbation_of_P: return "perturbation_of_P";
    case FormTag::normal_form: return "normal_form";
  }
  throw SolveError("unreachable form tag");
}

FormTag parse_form(const std::string& s) {
  if (s == "raw_germ") return FormTag::raw_germ;
  if (s == "prenormalized") return FormTag::prenormalized;
  if (s == "perturbation_of_P") return FormTag::perturbation_of_P;
  if (s == "normal_form") return FormTag::normal_form;
  throw ParseError("unknown form \"" + s + "\"");
}

Json slot_json(const Mono5& mo) {
  Json t = Json::object();
  t["z"] = mo.k;
  t["zeta"] = mo.l;
  t["zbar"] = mo.a;
  t["zetabar"] = mo.b;
  t["u"] = mo.m;
  return t;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read input file \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in \"" + path + "\": " + e.what());
  }
}

void write_report(const std::string& path, const Json& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write report file \"" + path + "\"");
  out << report.dump(2) << "\n";
  if (!out) throw ParseError("failed writing report file \"" + path + "\"");
}

}  // namespace

std::string gaussq_str(const GaussQ& q) { return q.str(); }

GaussQ gaussq_parse(const std::string& s) {
  if (s.empty()) throw ParseError("complex rational: empty string");
  if (s == "0") return GaussQ();
  if (s.back() != 'i') return GaussQ(rat_parse_io(s));
  std::string body = s.substr(0, s.size() - 1);
  // Split "a+b" / "a-b" at the first interior sign; rational components have
  // signs only in front, so any interior sign separates the two parts.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i)
    if (body[i] == '+' || body[i] == '-') {
      split = i;
      break;
    }
  std::string re = "0", im;
  if (split == std::string::npos) {
    im = body;
  } else {
    re = body.substr(0, split);
    im = body.substr(split);
  }
  if (im.empty() || im == "+") im = "1";
  else if (im == "-") im = "-1";
  else if (im[0] == '+') im = im.substr(1);
  return GaussQ(rat_parse_io(re), rat_parse_io(im));
}

Json serialize_terms(const WSeries& s) {
  Json arr = Json::array();
  for (const auto& [mo, c] : s.terms()) {
    Json t = slot_json(mo);
    t["re"] = rat_str(c.re());
    t["im"] = rat_str(c.im());
    arr.push_back(std::move(t));
  }
  return arr;
}

WSeries parse_terms(const Json& arr, Trunc tr) {
  if (!arr.is_array()) throw ParseError("expected an array of terms");
  WSeries out(tr);
  for (const Json& t : arr) {
    require_keys(t, {"z", "zeta", "zbar", "zetabar", "u", "re", "im"});
    const Mono5 mo{static_cast<int16_t>(int_field(t, "z")),
                   static_cast<int16_t>(int_field(t, "zeta")),
                   static_cast<int16_t>(int_field(t, "zbar")),
                   static_cast<int16_t>(int_field(t, "zetabar")),
                   static_cast<int16_t>(int_field(t, "u"))};
    if (!out.contains(mo))
      throw ParseError("monomial outside the truncation caps");
    const GaussQ c(rat_parse_io(str_field(t, "re")),
                   rat_parse_io(str_field(t, "im")));
    if (c.is_zero()) throw ParseError("zero-coefficient term");
    if (!out.coeff(mo).is_zero()) throw ParseError("duplicate term");
    out.add_term(mo, c);
  }
  return out;
}

Json serialize_hypersurface(const Hypersurface& M) {
  Json j = Json::object();
  j["truncation"] = serialize_trunc(M.trunc());
  j["form"] = form_str(M.form);
  j["phi"] = serialize_terms(M.phi);
  return j;
}

Hypersurface parse_hypersurface(const Json& j, int weight_cap, int zeta_cap) {
  require_keys(j, {"truncation", "phi"}, {"form"});
  const Trunc file_tr = parse_trunc(j.at("truncation"));
  const Trunc caps(weight_cap, zeta_cap);
  WSeries phi = parse_terms(j.at("phi"), file_tr.meet(caps)).zero_extended(caps);
  FormTag form = FormTag::perturbation_of_P;
  if (j.contains("form")) form = parse_form(str_field(j, "form"));
  return Hypersurface{std::move(phi), form};
}

Json serialize_hol_terms(const HolJet& f) {
  Json arr = Json::array();
  for (const auto& [mo, c] : f.terms()) {
    Json t = Json::object();
    t["z"] = mo.k;
    t["zeta"] = mo.l;
    t["w"] = mo.p;
    t["re"] = rat_str(c.re());
    t["im"] = rat_str(c.im());
    arr.push_back(std::move(t));
  }
  return arr;
}

HolJet parse_hol_terms(const Json& arr, Trunc tr) {
  if (!arr.is_array()) throw ParseError("expected an array of jet terms");
  HolJet out(tr);
  for (const Json& t : arr) {
    require_keys(t, {"z", "zeta", "w", "re", "im"});
    const Mono3 mo{static_cast<int16_t>(int_field(t, "z")),
                   static_cast<int16_t>(int_field(t, "zeta")),
                   static_cast<int16_t>(int_field(t, "w"))};
    if (!out.contains(mo))
      throw ParseError("jet monomial outside the truncation caps");
    const GaussQ c(rat_parse_io(str_field(t, "re")),
                   rat_parse_io(str_field(t, "im")));
    if (c.is_zero()) throw ParseError("zero-coefficient jet term");
    if (!out.coeff(mo).is_zero()) throw ParseError("duplicate jet term");
    out.add_term(mo, c);
  }
  return out;
}

Json serialize_map(const MapJet& H) {
  Json j = Json::object();
  j["shape"] = H.shape == MapJet::Shape::vspace ? "vspace" : "general";
  j["f"] = serialize_hol_terms(H.f);
  j["g"] = serialize_hol_terms(H.g);
  j["h"] = serialize_hol_terms(H.h);
  return j;
}

MapJet parse_map(const Json& j, Trunc tr) {
  require_keys(j, {"shape", "f", "g", "h"});
  MapJet H = MapJet::identity(tr);
  const std::string shape = str_field(j, "shape");
  if (shape == "vspace") H.shape = MapJet::Shape::vspace;
  else if (shape == "general") H.shape = MapJet::Shape::general;
  else throw ParseError("unknown map shape \"" + shape + "\"");
  H.f = parse_hol_terms(j.at("f"), tr);
  H.g = parse_hol_terms(j.at("g"), tr);
  H.h = parse_hol_terms(j.at("h"), tr);
  return H;
}

Json serialize_nf_report(const NFReport& rep) {
  Json j = Json::object();
  j["truncation"] = serialize_trunc(rep.normal_phi.trunc());
  Json params = Json::object();
  params["a"] = gaussq_str(rep.params_used.a);
  params["lambda"] = gaussq_str(rep.params_used.lambda);
  params["s"] = rat_str(rep.params_used.s);
  j["params"] = std::move(params);
  j["normal_phi"] = serialize_terms(rep.normal_phi);
  j["distinguished"] = serialize_terms(rep.distinguished);
  j["map"] = serialize_map(rep.map);
  j["phi3002"] = gaussq_str(rep.phi3002_at_0);
  j["phi5001"] = gaussq_str(rep.phi5001_at_0);
  j["spherical"] =
      rep.phi3002_at_0.is_zero() && rep.phi5001_at_0.is_zero();
  Json violations = Json::array();
  for (const Mono5& mo : is_in_normal_form(rep.normal_phi).violations)
    violations.push_back(slot_json(mo));
  j["violations"] = std::move(violations);
  return j;
}

NFReport parse_nf_report(const Json& j) {
  require_keys(j, {"truncation", "params", "normal_phi", "distinguished",
                   "map", "phi3002", "phi5001", "spherical", "violations"});
  const Trunc tr = parse_trunc(j.at("truncation"));
  NFReport rep;
  require_keys(j.at("params"), {"a", "lambda", "s"});
  rep.params_used.a = gaussq_parse(str_field(j.at("params"), "a"));
  rep.params_used.lambda = gaussq_parse(str_field(j.at("params"), "lambda"));
  rep.params_used.s = rat_parse_io(str_field(j.at("params"), "s"));
  rep.normal_phi = parse_terms(j.at("normal_phi"), tr);
  rep.distinguished = parse_terms(j.at("distinguished"), tr);
  rep.map = parse_map(j.at("map"), tr);
  rep.phi3002_at_0 = gaussq_parse(str_field(j, "phi3002"));
  rep.phi5001_at_0 = gaussq_parse(str_field(j, "phi5001"));
  return rep;
}

Json serialize_sphericity(const SphericityReport& rep) {
  Json j = Json::object();
  j["spherical"] = rep.spherical;
  j["phi3002"] = gaussq_str(rep.phi3002);
  j["phi5001"] = gaussq_str(rep.phi5001);
  return j;
}

SphericityReport parse_sphericity(const Json& j) {
  require_keys(j, {"spherical", "phi3002", "phi5001"});
  SphericityReport rep;
  rep.spherical = bool_field(j, "spherical");
  rep.phi3002 = gaussq_parse(str_field(j, "phi3002"));
  rep.phi5001 = gaussq_parse(str_field(j, "phi5001"));
  return rep;
}

Json serialize_verify(const VerifyReport& rep) {
  Json j = Json::object();
  j["levi_residual_zero"] = rep.levi_residual_zero;
  j["normal_form_ok"] = rep.normal_form_ok;
  j["reality_ok"] = rep.reality_ok;
  Json nd = Json::object();
  nd["degenerate_to_order"] = rep.nondeg.degenerate_to_order;
  nd["kernel_rank_ok"] = rep.nondeg.kernel_rank_ok;
  nd["two_nondeg_witness"] = rep.nondeg.two_nondeg_witness;
  j["nondeg_report"] = std::move(nd);
  return j;
}

VerifyReport parse_verify(const Json& j) {
  require_keys(j, {"levi_residual_zero", "normal_form_ok", "reality_ok",
                   "nondeg_report"});
  VerifyReport rep;
  rep.levi_residual_zero = bool_field(j, "levi_residual_zero");
  rep.normal_form_ok = bool_field(j, "normal_form_ok");
  rep.reality_ok = bool_field(j, "reality_ok");
  const Json& nd = j.at("nondeg_report");
  require_keys(nd, {"degenerate_to_order", "kernel_rank_ok",
                    "two_nondeg_witness"});
  rep.nondeg.degenerate_to_order = bool_field(nd, "degenerate_to_order");
  rep.nondeg.kernel_rank_ok = bool_field(nd, "kernel_rank_ok");
  rep.nondeg.two_nondeg_witness = bool_field(nd, "two_nondeg_witness");
  return rep;
}

Json serialize_algebra(const AlgebraReport& rep) {
  Json j = Json::object();
  j["grading_ok"] = rep.grading_ok;
  j["tangency_ok"] = rep.tangency_ok;
  Json dims = Json::object();
  dims["g"] = rep.dim_g;
  dims["h"] = rep.dim_h;
  j["dims"] = std::move(dims);
  return j;
}

AlgebraReport parse_algebra(const Json& j) {
  require_keys(j, {"grading_ok", "tangency_ok", "dims"});
  AlgebraReport rep;
  rep.grading_ok = bool_field(j, "grading_ok");
  rep.tangency_ok = bool_field(j, "tangency_ok");
  require_keys(j.at("dims"), {"g", "h"});
  rep.dim_g = int_field(j.at("dims"), "g");
  rep.dim_h = int_field(j.at("dims"), "h");
  return rep;
}

NFReport normalize_job(const Hypersurface& M_in, const NFParams& params) {
  Hypersurface M = M_in;
  if (M.form == FormTag::raw_germ) M = prenormalize(M).first;
  if (M.form == FormTag::prenormalized) M = as_perturbation(M);
  const Trunc report_tr = M.phi.trunc();
  // Zeta margin so that every reported (weight <= W, zpair <= D) slot stays
  // exact through the weight-by-weight corrections.
  const Trunc work_tr(report_tr.weight,
                      report_tr.zeta + std::max(1, report_tr.weight - 2));
  M.phi = M.phi.zero_extended(work_tr);
  NFReport rep = normalize(M, params);
  rep.normal_phi = rep.normal_phi.truncated(report_tr);
  rep.distinguished = rep.distinguished.truncated(report_tr);
  rep.map.f = rep.map.f.truncated(report_tr);
  rep.map.g = rep.map.g.truncated(report_tr);
  rep.map.h = rep.map.h.truncated(report_tr);
  return rep;
}

SphericityReport sphericity_of(const NFReport& rep) {
  SphericityReport s;
  s.phi3002 = rep.phi3002_at_0;
  s.phi5001 = rep.phi5001_at_0;
  s.spherical = s.phi3002.is_zero() && s.phi5001.is_zero();
  return s;
}

VerifyReport verify_surface(const Hypersurface& M) {
  VerifyReport v;
  v.reality_ok = M.graph().is_real();
  try {
    v.levi_residual_zero = residual_check(M).is_zero();
  } catch (const ValidationError&) {
    v.levi_residual_zero = false;
  } catch (const SolveError&) {
    v.levi_residual_zero = false;
  }
  try {
    const WSeries pert =
        M.phi_carries_graph() ? as_perturbation(M).phi : M.phi;
    v.normal_form_ok = pert.is_real() && is_in_normal_form(pert).ok;
  } catch (const ValidationError&) {
    v.normal_form_ok = false;
  }
  try {
    v.nondeg = validate_2nondegenerate(M);
  } catch (const ValidationError&) {
    v.nondeg = NondegReport{};
  } catch (const SolveError&) {
    v.nondeg = NondegReport{};
  }
  return v;
}

AlgebraReport algebra_check(Trunc tr) {
  AlgebraReport rep;
  const std::vector<VectorField> basis = algebra_basis(tr);
  rep.dim_g = static_cast<int>(basis.size());
  rep.grading_ok = true;
  rep.tangency_ok = true;
  for (const VectorField& X : basis) {
    if (!X.grade_consistent()) rep.grading_ok = false;
    if (!tangency_defect(X, tr).is_zero()) rep.tangency_ok = false;
  }
  rep.dim_h = stability_kernel_dim(tr);
  return rep;
}

int run(const JobConfig& cfg) {
  if (cfg.weight_cap < 3)
    throw ValidationError("weight cap must be at least 3");
  if (cfg.zeta_cap < 0) throw ValidationError("zeta cap must be nonnegative");

  Json report;
  std::ostringstream summary;
  int status = 0;

  switch (cfg.command) {
    case JobConfig::Command::normalize: {
      const Hypersurface M = parse_hypersurface(read_json_file(cfg.input_path),
                                                cfg.weight_cap, cfg.zeta_cap);
      const NFReport rep = normalize_job(M, cfg.params);
      report = serialize_nf_report(rep);
      const SphericityReport s = sphericity_of(rep);
      summary << "normal form: " << rep.normal_phi.terms().size()
              << " term(s); spherical: " << (s.spherical ? "true" : "false")
              << " (phi3002 = " << gaussq_str(s.phi3002)
              << ", phi5001 = " << gaussq_str(s.phi5001) << ")";
      break;
    }
    case JobConfig::Command::sphericity: {
      const Hypersurface M = parse_hypersurface(read_json_file(cfg.input_path),
                                                cfg.weight_cap, cfg.zeta_cap);
      const SphericityReport s = sphericity_of(normalize_job(M, cfg.params));
      report = serialize_sphericity(s);
      summary << "spherical: " << (s.spherical ? "true" : "false")
              << " (phi3002 = " << gaussq_str(s.phi3002)
              << ", phi5001 = " << gaussq_str(s.phi5001) << ")";
      break;
    }
    case JobConfig::Command::reconstruct: {
      const Json j = read_json_file(cfg.input_path);
      require_keys(j, {"truncation", "chi"});
      const Trunc file_tr = parse_trunc(j.at("truncation"));
      const Trunc caps(cfg.weight_cap, cfg.zeta_cap);
      const WSeries chi =
          parse_terms(j.at("chi"), file_tr.meet(caps)).zero_extended(caps);
      const Hypersurface M = reconstruct(make_distinguished(chi));
      report = serialize_hypersurface(M);
      summary << "reconstructed normal form: " << M.phi.terms().size()
              << " term(s) beyond the model";
      break;
    }
    case JobConfig::Command::verify: {
      const Hypersurface M = parse_hypersurface(read_json_file(cfg.input_path),
                                                cfg.weight_cap, cfg.zeta_cap);
      const VerifyReport v = verify_surface(M);
      report = serialize_verify(v);
      status = v.all_ok() ? 0 : 2;
      summary << "verify: " << (v.all_ok() ? "PASS" : "FAIL")
              << " (levi_residual_zero=" << (v.levi_residual_zero ? "1" : "0")
              << " normal_form_ok=" << (v.normal_form_ok ? "1" : "0")
              << " reality_ok=" << (v.reality_ok ? "1" : "0")
              << " degenerate_to_order="
              << (v.nondeg.degenerate_to_order ? "1" : "0")
              << " kernel_rank_ok=" << (v.nondeg.kernel_rank_ok ? "1" : "0")
              << " two_nondeg_witness="
              << (v.nondeg.two_nondeg_witness ? "1" : "0") << ")";
      break;
    }
    case JobConfig::Command::algebra_check: {
      const AlgebraReport a =
          algebra_check(Trunc(cfg.weight_cap, cfg.zeta_cap));
      report = serialize_algebra(a);
      const bool ok =
          a.grading_ok && a.tangency_ok && a.dim_g == 10 && a.dim_h == 5;
      status = ok ? 0 : 2;
      summary << "algebra check: dims g=" << a.dim_g << " h=" << a.dim_h
              << "; grading " << (a.grading_ok ? "ok" : "BROKEN")
              << "; tangency " << (a.tangency_ok ? "ok" : "BROKEN");
      break;
    }
  }

  if (!cfg.output_path.empty()) write_report(cfg.output_path, report);
  if (!cfg.quiet) std::cout << summary.str() << "\n";
  return status;
}

}  // namespace crnf
