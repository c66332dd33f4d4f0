#include "areabound/io.hpp"

#include <fstream>
#include <sstream>

namespace areabound::io {

json domain_to_json(const PlanarDomain& d) {
  json j;
  j["kind"] = d.kind_name();
  j["nx"] = d.nx();
  j["ny"] = d.ny();
  switch (d.kind()) {
    case DomainKind::Rectangle:
      j["extents"] = {d.rect_x0(), d.rect_x1(), d.rect_y0(), d.rect_y1()};
      break;
    case DomainKind::Disc:
      j["center"] = {d.disc_cx(), d.disc_cy()};
      j["radius"] = d.disc_radius();
      break;
    default:
      break;
  }
  return j;
}

PlanarDomain domain_from_json(const json& j) {
  if (!j.contains("kind") || !j.contains("nx") || !j.contains("ny"))
    throw std::invalid_argument("domain json: need kind, nx, ny");
  std::string kind = j.at("kind").get<std::string>();
  int nx = j.at("nx").get<int>(), ny = j.at("ny").get<int>();
  if (kind == "unit_square") return PlanarDomain::unit_square(nx, ny);
  if (kind == "unit_disc") return PlanarDomain::unit_disc(nx, ny);
  if (kind == "rectangle") {
    auto e = j.at("extents");
    return PlanarDomain::rectangle(e.at(0), e.at(1), e.at(2), e.at(3), nx, ny);
  }
  if (kind == "disc") {
    auto c = j.at("center");
    return PlanarDomain::disc(c.at(0), c.at(1), j.at("radius").get<double>(), nx, ny);
  }
  throw std::invalid_argument("domain json: unknown kind '" + kind + "'");
}

json surface_to_json(const GraphSurface& s) {
  json j;
  j["domain"] = domain_to_json(s.domain());
  j["codim"] = s.codim();
  json vals = json::array();
  for (int c = 0; c < s.codim(); ++c) vals.push_back(s.zeta_field().comps[c]);
  j["values"] = std::move(vals);
  return j;
}

GraphSurface surface_from_json(const json& j) {
  PlanarDomain d = domain_from_json(j.at("domain"));
  int m = j.at("codim").get<int>();
  VectorField z(d, m);
  const auto& vals = j.at("values");
  if (static_cast<int>(vals.size()) != m)
    throw std::invalid_argument("surface json: component count mismatch");
  for (int c = 0; c < m; ++c) {
    z.comps[c] = vals.at(c).get<std::vector<double>>();
    if (static_cast<int>(z.comps[c].size()) != d.nx() * d.ny())
      throw std::invalid_argument("surface json: value array size mismatch");
  }
  return GraphSurface(d, std::move(z));
}

json solve_meta_to_json(const SolveResult& r) {
  json j;
  j["converged"] = r.converged;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  if (!r.energy_history.empty()) {
    j["energy_first"] = r.energy_history.front();
    j["energy_last"] = r.energy_history.back();
  }
  return j;
}

SolutionMeta solution_meta_from_json(const json& j) {
  SolutionMeta m;
  if (j.is_object() && j.contains("converged")) {
    m.solved = true;
    m.converged = j.at("converged").get<bool>();
    m.residual = j.value("residual", 0.0);
  }
  return m;
}

json immersion_to_json(const Immersion& im) {
  json j;
  j["nr"] = im.nr();
  j["nphi"] = im.nphi();
  std::vector<double> xs, ys, zs;
  int n = im.nr() * im.nphi();
  xs.reserve(n);
  ys.reserve(n);
  zs.reserve(n);
  for (int i = 0; i < im.nr(); ++i)
    for (int k = 0; k < im.nphi(); ++k) {
      const Vec3& p = im.X(i, k);
      xs.push_back(p[0]);
      ys.push_back(p[1]);
      zs.push_back(p[2]);
    }
  j["x"] = std::move(xs);
  j["y"] = std::move(ys);
  j["z"] = std::move(zs);
  return j;
}

Immersion immersion_from_json(const json& j) {
  int nr = j.at("nr").get<int>(), nphi = j.at("nphi").get<int>();
  auto xs = j.at("x").get<std::vector<double>>();
  auto ys = j.at("y").get<std::vector<double>>();
  auto zs = j.at("z").get<std::vector<double>>();
  if (xs.size() != ys.size() || ys.size() != zs.size() ||
      static_cast<int>(xs.size()) != nr * nphi)
    throw std::invalid_argument("immersion json: array size mismatch");
  std::vector<Vec3> vals(nr * nphi);
  for (size_t k = 0; k < xs.size(); ++k) vals[k] = Vec3(xs[k], ys[k], zs[k]);
  return Immersion::from_samples(nr, nphi, std::move(vals));
}

json report_to_json(const BoundReport& r, const std::string& version,
                    const std::string& digest) {
  json j;
  j["bound_id"] = r.bound_id;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["verdict"] = verdict_name(r.verdict);
  json hyp = json::array();
  for (const auto& h : r.hypotheses)
    hyp.push_back({{"name", h.name}, {"satisfied", h.satisfied}, {"value", h.value}});
  j["hypotheses"] = std::move(hyp);
  j["inputs"] = r.inputs;
  j["grid"] = r.grid;
  if (!r.note.empty()) j["note"] = r.note;
  j["version"] = version;
  j["config_digest"] = digest;
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("malformed json in '" + path + "': " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file '" + path + "'");
  out << j.dump(2) << "\n";
}

void append_jsonl(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::invalid_argument("cannot write file '" + path + "'");
  out << j.dump() << "\n";
}

std::string config_digest(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

PlanarDomain parse_domain_spec(const std::string& spec) {
  if (spec.find(".json") != std::string::npos)
    return domain_from_json(load_json_file(spec));
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(tok);
    return out;
  };
  auto parts = split(spec, ':');
  auto parse_n = [&](const std::string& s) -> std::pair<int, int> {
    auto xy = split(s, 'x');
    int a = std::stoi(xy.at(0));
    int b = xy.size() > 1 ? std::stoi(xy.at(1)) : a;
    return {a, b};
  };
  if (parts.size() == 2 && parts[0] == "unit_square") {
    auto [nx, ny] = parse_n(parts[1]);
    return PlanarDomain::unit_square(nx, ny);
  }
  if (parts.size() == 2 && parts[0] == "unit_disc") {
    auto [nx, ny] = parse_n(parts[1]);
    return PlanarDomain::unit_disc(nx, ny);
  }
  if (parts.size() == 3 && parts[0] == "rect") {
    auto e = split(parts[1], ',');
    auto [nx, ny] = parse_n(parts[2]);
    return PlanarDomain::rectangle(std::stod(e.at(0)), std::stod(e.at(1)),
                                   std::stod(e.at(2)), std::stod(e.at(3)), nx, ny);
  }
  throw std::invalid_argument("bad domain spec '" + spec + "'");
}

}  // namespace areabound::io
