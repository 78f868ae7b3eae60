#include "hdrelay/serialization.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hdrelay {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw Error(ErrorKind::ParseError, where + ": not a decimal number: '" + text + "'");
  return v;
}

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where, "expected an integer");
  return v.get<std::int64_t>();
}

double as_number(const json& v, const std::string& where) {
  if (v.is_string()) return parse_double(v.get<std::string>(), where);
  if (v.is_number()) return v.get<double>();
  parse_fail(where, "expected a decimal string");
}

void check_type(const json& doc, const char* expected) {
  if (!doc.is_object()) parse_fail("", "expected an object");
  auto it = doc.find("type");
  if (it != doc.end() && (!it->is_string() || it->get<std::string>() != expected))
    parse_fail("/type", std::string("expected document type '") + expected + "'");
}

std::string model_tag(ModelKind k) {
  switch (k) {
    case ModelKind::GaussianReal: return "gaussian_real";
    case ModelKind::GaussianComplex: return "gaussian_complex";
    case ModelKind::LinearDeterministic: return "linear_deterministic";
  }
  return "";
}

json gain_to_json(const GainValue& g) {
  if (const auto* r = std::get_if<double>(&g)) return format_double(*r);
  if (const auto* c = std::get_if<std::complex<double>>(&g))
    return json{{"re", format_double(c->real())}, {"im", format_double(c->imag())}};
  if (const auto* s = std::get_if<ShiftLevel>(&g)) return json{{"level", s->n}};
  return json{{"matrix", std::get<FieldMatrix>(g).to_rows()}};
}

GainValue gain_from_json(const json& g, const ChannelModel& model, const std::string& where) {
  switch (model.kind) {
    case ModelKind::GaussianReal: return as_number(g, where);
    case ModelKind::GaussianComplex:
      return std::complex<double>(as_number(field(g, "re", where), where + "/re"),
                                  as_number(field(g, "im", where), where + "/im"));
    case ModelKind::LinearDeterministic: {
      if (!g.is_object()) parse_fail(where, "expected {\"level\": n} or {\"matrix\": [...]}");
      if (g.contains("level")) return ShiftLevel{static_cast<int>(as_int(g["level"], where + "/level"))};
      const json& rows = field(g, "matrix", where);
      if (!rows.is_array()) parse_fail(where + "/matrix", "expected an array of rows");
      std::vector<std::vector<std::int64_t>> entries;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string rw = where + "/matrix/" + std::to_string(r);
        if (!rows[r].is_array()) parse_fail(rw, "expected an array");
        std::vector<std::int64_t> row;
        for (std::size_t c = 0; c < rows[r].size(); ++c)
          row.push_back(as_int(rows[r][c], rw + "/" + std::to_string(c)));
        entries.push_back(std::move(row));
      }
      try {
        return FieldMatrix(model.p, entries);
      } catch (const Error& e) {
        parse_fail(where + "/matrix", e.what());
      }
    }
  }
  parse_fail(where, "unsupported model");
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace

json to_json(const Network& net) {
  json model{{"kind", model_tag(net.model().kind)}};
  if (net.model().kind == ModelKind::LinearDeterministic) {
    model["p"] = net.model().p;
    model["k"] = net.model().k;
  }
  json edges = json::array();
  for (const auto& e : net.edges()) edges.push_back({{"u", e.from}, {"v", e.to}, {"gain", gain_to_json(e.gain)}});
  return json{{"type", "network"},        {"nodes", net.num_nodes()}, {"source", net.source()},
              {"dest", net.destination()}, {"model", model},           {"edges", edges}};
}

Network network_from_json(const json& doc) {
  check_type(doc, "network");
  const int n = static_cast<int>(as_int(field(doc, "nodes", ""), "/nodes"));
  const int s = static_cast<int>(as_int(field(doc, "source", ""), "/source"));
  const int d = static_cast<int>(as_int(field(doc, "dest", ""), "/dest"));
  const json& m = field(doc, "model", "");
  const json& kind = field(m, "kind", "/model");
  if (!kind.is_string()) parse_fail("/model/kind", "expected a string");
  ChannelModel model;
  const auto tag = kind.get<std::string>();
  if (tag == "gaussian_real") {
    model = ChannelModel::gaussian_real();
  } else if (tag == "gaussian_complex") {
    model = ChannelModel::gaussian_complex();
  } else if (tag == "linear_deterministic") {
    model = ChannelModel::linear_deterministic(static_cast<int>(as_int(field(m, "p", "/model"), "/model/p")),
                                               static_cast<int>(as_int(field(m, "k", "/model"), "/model/k")));
    if (!is_prime(model.p)) parse_fail("/model/p", "field size must be prime");
  } else {
    parse_fail("/model/kind", "unknown model tag '" + tag + "'");
  }
  const json& edges = field(doc, "edges", "");
  if (!edges.is_array()) parse_fail("/edges", "expected an array");
  std::vector<Edge> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "/edges/" + std::to_string(i);
    const json& e = edges[i];
    out.push_back({static_cast<NodeId>(as_int(field(e, "u", where), where + "/u")),
                   static_cast<NodeId>(as_int(field(e, "v", where), where + "/v")),
                   gain_from_json(field(e, "gain", where), model, where + "/gain")});
  }
  return make_network(n, s, d, model, std::move(out));
}

json to_json(const Schedule& q) {
  json entries = json::array();
  for (const auto& [mask, p] : q.entries())
    entries.push_back({{"modes", mode_string(ModeConfig{mask}, q.num_nodes())}, {"p", format_double(p)}});
  return json{{"type", "schedule"}, {"nodes", q.num_nodes()}, {"entries", entries}};
}

Schedule schedule_from_json(const json& doc) {
  check_type(doc, "schedule");
  const int n = static_cast<int>(as_int(field(doc, "nodes", ""), "/nodes"));
  const json& entries = field(doc, "entries", "");
  if (!entries.is_array()) parse_fail("/entries", "expected an array");
  std::map<NodeMask, double> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "/entries/" + std::to_string(i);
    const json& modes = field(entries[i], "modes", where);
    if (!modes.is_string() || modes.get<std::string>().size() != static_cast<std::size_t>(n))
      parse_fail(where + "/modes", "expected a bit string of length 'nodes'");
    ModeConfig m;
    try {
      m = parse_mode_string(modes.get<std::string>());
    } catch (const Error& e) {
      parse_fail(where + "/modes", e.what());
    }
    if (out.count(m.bits)) parse_fail(where, "repeated mode configuration");
    out[m.bits] = as_number(field(entries[i], "p", where), where + "/p");
  }
  return Schedule(n, std::move(out));
}

json to_json(const GroupSchedule& gs) {
  json locals = json::array();
  for (const auto& local : gs.locals()) {
    json row = json::array();
    for (double p : local) row.push_back(format_double(p));
    locals.push_back(row);
  }
  return json{{"type", "group_schedule"}, {"nodes", gs.num_nodes()}, {"groups", gs.groups()}, {"locals", locals}};
}

GroupSchedule group_schedule_from_json(const json& doc) {
  check_type(doc, "group_schedule");
  const int n = static_cast<int>(as_int(field(doc, "nodes", ""), "/nodes"));
  const json& groups = field(doc, "groups", "");
  const json& locals = field(doc, "locals", "");
  if (!groups.is_array()) parse_fail("/groups", "expected an array");
  if (!locals.is_array()) parse_fail("/locals", "expected an array");
  std::vector<std::vector<NodeId>> gs;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const std::string where = "/groups/" + std::to_string(i);
    if (!groups[i].is_array()) parse_fail(where, "expected an array");
    std::vector<NodeId> g;
    for (std::size_t j = 0; j < groups[i].size(); ++j)
      g.push_back(static_cast<NodeId>(as_int(groups[i][j], where + "/" + std::to_string(j))));
    gs.push_back(std::move(g));
  }
  std::vector<std::vector<double>> ls;
  for (std::size_t i = 0; i < locals.size(); ++i) {
    const std::string where = "/locals/" + std::to_string(i);
    if (!locals[i].is_array()) parse_fail(where, "expected an array");
    std::vector<double> l;
    for (std::size_t j = 0; j < locals[i].size(); ++j)
      l.push_back(as_number(locals[i][j], where + "/" + std::to_string(j)));
    ls.push_back(std::move(l));
  }
  return GroupSchedule(n, std::move(gs), std::move(ls));
}

Network parse_network(const std::string& text) { return network_from_json(parse_text(text)); }
Schedule parse_schedule(const std::string& text) { return schedule_from_json(parse_text(text)); }
GroupSchedule parse_group_schedule(const std::string& text) { return group_schedule_from_json(parse_text(text)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::BadArgument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::BadArgument, "cannot write '" + path + "'");
  out << text;
}

}  // namespace hdrelay
