#include "ainf/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ainf::io {

using nlohmann::json;

namespace {

std::string locate(const std::string& origin, int line, int column, const std::string& message) {
  if (line <= 0) return origin + ": " + message;
  return origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

struct Record {
  json value;
  std::string text;
  int line;
};

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      try {
        records_.push_back({json::parse(line), line, no});
      } catch (const json::parse_error& e) {
        throw ParseError(origin_, no, static_cast<int>(std::max<std::size_t>(e.byte, 1)), "malformed JSON record");
      }
      if (!records_.back().value.is_object()) throw ParseError(origin_, no, 1, "record is not a JSON object");
    }
  }

  const std::vector<Record>& records() const { return records_; }

  [[noreturn]] void fail(const Record& r, const std::string& key, const std::string& message) const {
    auto pos = key.empty() ? std::string::npos : r.text.find("\"" + key + "\"");
    int column = pos == std::string::npos ? 1 : static_cast<int>(pos) + 1;
    throw ParseError(origin_, r.line, column, message);
  }

  const json& field(const Record& r, const std::string& key) const {
    auto it = r.value.find(key);
    if (it == r.value.end()) fail(r, "", "missing \"" + key + "\"");
    return *it;
  }
  std::string string(const Record& r, const std::string& key) const {
    const json& v = field(r, key);
    if (!v.is_string()) fail(r, key, "\"" + key + "\" must be a string");
    return v.get<std::string>();
  }
  long integer(const Record& r, const std::string& key) const {
    const json& v = field(r, key);
    if (!v.is_number_integer()) fail(r, key, "\"" + key + "\" must be an integer");
    return v.get<long>();
  }
  std::vector<std::string> strings(const Record& r, const std::string& key) const {
    const json& v = field(r, key);
    if (!v.is_array()) fail(r, key, "\"" + key + "\" must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) fail(r, key, "\"" + key + "\" must be an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }
  std::string kind(const Record& r) const { return string(r, "kind"); }
  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::vector<Record> records_;
};

// Scalars are read in the document field and then moved to the working field.
struct FieldPlan {
  Field document;
  Field working;
};

FieldPlan plan_field(const Reader& rd, const Record& header, const ReadOptions& opts) {
  Field doc;
  try {
    doc = Field::parse(rd.string(header, "field"));
  } catch (const std::invalid_argument& e) {
    rd.fail(header, "field", e.what());
  }
  Field work = opts.field.value_or(doc);
  if (!(work == doc) && !doc.is_rational())
    rd.fail(header, "field", "document field " + doc.name() + " cannot be read as " + work.name());
  return {doc, work};
}

Scalar read_scalar(const Reader& rd, const Record& r, const std::string& key, const json& v, const FieldPlan& fp) {
  try {
    if (v.is_string()) return Scalar::parse(v.get<std::string>(), fp.document).in(fp.working);
    if (v.is_number_integer()) return Scalar(v.get<long>()).in(fp.document).in(fp.working);
  } catch (const std::exception& e) {
    rd.fail(r, key, std::string("bad scalar: ") + e.what());
  }
  rd.fail(r, key, "scalar must be a string or an integer");
}

SparseVec read_vector(const Reader& rd, const Record& r, const std::string& key, const GradedSpace& space,
                      const FieldPlan& fp) {
  const json& v = rd.field(r, key);
  if (!v.is_array()) rd.fail(r, key, "\"" + key + "\" must be a list of [name, scalar] pairs");
  SparseVec out;
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string())
      rd.fail(r, key, "\"" + key + "\" must be a list of [name, scalar] pairs");
    auto i = space.index_of(e[0].get<std::string>());
    if (!i) rd.fail(r, key, "unknown basis element '" + e[0].get<std::string>() + "'");
    out.add(*i, read_scalar(rd, r, key, e[1], fp));
  }
  return out;
}

json write_vector(const GradedSpace& space, const SparseVec& v) {
  json out = json::array();
  for (const auto& [i, c] : v) out.push_back(json::array({space.name(i), c.str()}));
  return out;
}

int object_index(const Reader& rd, const Record& r, const std::string& key, const GradedQuiver& q,
                 const std::string& name) {
  auto i = q.index_of(name);
  if (!i) rd.fail(r, key, "unknown object '" + name + "'");
  return *i;
}

// objects [x_n..x_0] and inputs [f_n..f_1] to a path-order tuple over q.
Tuple read_tuple(const Reader& rd, const Record& r, const GradedQuiver& q) {
  long n = rd.integer(r, "arity");
  if (n < 1 || n > kMaxArity) rd.fail(r, "arity", "arity must lie in [1, " + std::to_string(kMaxArity) + "]");
  auto objs = rd.strings(r, "objects");
  auto ins = rd.strings(r, "inputs");
  if (static_cast<long>(objs.size()) != n + 1) rd.fail(r, "objects", "expected arity + 1 objects");
  if (static_cast<long>(ins.size()) != n) rd.fail(r, "inputs", "expected arity inputs");
  std::vector<int> o(n + 1), f(n);
  for (long j = 0; j <= n; ++j) o[j] = object_index(rd, r, "objects", q, objs[n - j]);
  for (long j = 0; j < n; ++j) {
    auto i = q.hom(o[j], o[j + 1]).index_of(ins[n - 1 - j]);
    if (!i)
      rd.fail(r, "inputs", "'" + ins[n - 1 - j] + "' is not a basis element of " + q.object(o[j]) + " -> " +
                               q.object(o[j + 1]));
    f[j] = *i;
  }
  return Tuple::make(o, f);
}

json write_tuple_objects(const GradedQuiver& q, const Tuple& t) {
  json out = json::array();
  for (int j = t.n(); j >= 0; --j) out.push_back(q.object(t.object(j)));
  return out;
}

json write_tuple_inputs(const GradedQuiver& q, const Tuple& t) {
  json out = json::array();
  for (int j = t.n() - 1; j >= 0; --j) out.push_back(q.hom(t.object(j), t.object(j + 1)).name(t.input(j)));
  return out;
}

std::string lines(const std::vector<json>& records) {
  std::string out;
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

}  // namespace

ParseError::ParseError(std::string origin, int line, int column, const std::string& message)
    : std::runtime_error(locate(origin, line, column, message)), origin_(std::move(origin)), line_(line),
      column_(column) {}

CategoryDocument parse_category(const std::string& text, const std::string& origin, const ReadOptions& opts) {
  Reader rd(text, origin);
  const auto& recs = rd.records();
  if (recs.empty()) throw ParseError(origin, 0, 0, "empty document");
  const Record& header = recs.front();
  if (rd.kind(header) != "category") rd.fail(header, "kind", "first record must have kind \"category\"");
  FieldPlan fp = plan_field(rd, header, opts);
  CategoryDocument doc;
  if (header.value.contains("max_arity")) {
    long n = rd.integer(header, "max_arity");
    if (n < 1 || n > kMaxArity) rd.fail(header, "max_arity", "max_arity must lie in [1, " + std::to_string(kMaxArity) + "]");
    doc.max_arity = static_cast<int>(n);
  }

  std::vector<std::string> names;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    std::string k = rd.kind(recs[i]);
    if (k == "category") rd.fail(recs[i], "kind", "duplicate category header");
    if (k != "object") continue;
    std::string name = rd.string(recs[i], "name");
    if (!seen.insert(name).second) rd.fail(recs[i], "name", "duplicate object '" + name + "'");
    if (names.size() >= 255) rd.fail(recs[i], "name", "too many objects");
    names.push_back(name);
  }
  GradedQuiver proto(names);
  int n = proto.size();
  std::vector<std::vector<BasisElement>> bases(static_cast<std::size_t>(n) * n);
  for (const auto& r : recs) {
    if (rd.kind(r) != "basis") continue;
    int a = object_index(rd, r, "source", proto, rd.string(r, "source"));
    int b = object_index(rd, r, "target", proto, rd.string(r, "target"));
    std::string name = rd.string(r, "name");
    long deg = rd.integer(r, "degree");
    auto& list = bases[static_cast<std::size_t>(a) * n + b];
    for (const auto& e : list)
      if (e.name == name) rd.fail(r, "name", "duplicate basis element '" + name + "'");
    if (list.size() >= 255) rd.fail(r, "name", "hom space too large");
    list.push_back({name, static_cast<int>(deg)});
  }
  auto q = std::make_shared<GradedQuiver>(names);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) q->set_hom(a, b, GradedSpace(bases[static_cast<std::size_t>(a) * n + b]));

  Components m;
  std::vector<int> same(n);
  for (int x = 0; x < n; ++x) same[x] = x;
  std::vector<std::optional<SparseVec>> units(n);
  const Record* first_unit = nullptr;
  for (const auto& r : recs) {
    std::string k = rd.kind(r);
    if (k == "op") {
      Tuple t = read_tuple(rd, r, *q);
      SparseVec v = read_vector(rd, r, "output", q->hom(t.first(), t.last()), fp);
      if (m.count(t)) rd.fail(r, "objects", "duplicate operation entry");
      try {
        check_components(*q, *q, same, {{t, v}}, 2);
      } catch (const StructuralError& e) {
        rd.fail(r, "output", e.what());
      }
      if (!v.empty()) m.emplace(t, std::move(v));
    } else if (k == "unit") {
      int x = object_index(rd, r, "object", *q, rd.string(r, "object"));
      if (units[x]) rd.fail(r, "object", "duplicate unit for '" + q->object(x) + "'");
      SparseVec v = read_vector(rd, r, "value", q->hom(x, x), fp);
      if (auto d = q->hom(x, x).degree_of(v); !v.empty() && d != 0) rd.fail(r, "value", "unit must have degree 0");
      units[x] = std::move(v);
      if (!first_unit) first_unit = &r;
    } else if (k != "category" && k != "object" && k != "basis") {
      rd.fail(r, "kind", "unknown record kind '" + k + "'");
    }
  }
  std::optional<std::vector<SparseVec>> unit_list;
  if (first_unit) {
    unit_list.emplace();
    for (int x = 0; x < n; ++x) {
      if (!units[x]) rd.fail(*first_unit, "object", "no unit given for '" + q->object(x) + "'");
      unit_list->push_back(*units[x]);
    }
  }
  doc.category = std::make_shared<const AInftyCategory>(make_category(q, fp.working, std::move(m), unit_list));
  return doc;
}

std::string serialize_category(const AInftyCategory& c, std::optional<int> max_arity) {
  const GradedQuiver& q = c.q();
  std::vector<json> out;
  json header{{"kind", "category"}, {"field", c.field.name()}};
  if (max_arity) header["max_arity"] = *max_arity;
  out.push_back(header);
  for (const auto& name : q.objects()) out.push_back({{"kind", "object"}, {"name", name}});
  for (int a = 0; a < q.size(); ++a)
    for (int b = 0; b < q.size(); ++b)
      for (const auto& e : q.hom(a, b).basis())
        out.push_back(
            {{"kind", "basis"}, {"source", q.object(a)}, {"target", q.object(b)}, {"name", e.name}, {"degree", e.degree}});
  for (const auto& [t, v] : c.m()) {
    if (v.empty()) continue;
    out.push_back({{"kind", "op"},
                   {"arity", t.n()},
                   {"objects", write_tuple_objects(q, t)},
                   {"inputs", write_tuple_inputs(q, t)},
                   {"output", write_vector(q.hom(t.first(), t.last()), v)}});
  }
  if (c.units)
    for (int x = 0; x < q.size(); ++x)
      out.push_back({{"kind", "unit"}, {"object", q.object(x)}, {"value", write_vector(q.hom(x, x), (*c.units)[x])}});
  return lines(out);
}

FunctorDocument parse_functor(const std::string& text, const std::string& origin, const CategoryResolver& resolve,
                              const ReadOptions& opts) {
  Reader rd(text, origin);
  const auto& recs = rd.records();
  if (recs.empty()) throw ParseError(origin, 0, 0, "empty document");
  const Record& header = recs.front();
  if (rd.kind(header) != "functor") rd.fail(header, "kind", "first record must have kind \"functor\"");
  FieldPlan fp = plan_field(rd, header, opts);
  FunctorDocument doc;
  doc.source_ref = rd.string(header, "source");
  doc.target_ref = rd.string(header, "target");
  auto load = [&](const std::string& key, const std::string& ref) {
    try {
      return resolve(ref);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      rd.fail(header, key, "cannot load '" + ref + "': " + e.what());
    }
  };
  CategoryPtr src = load("source", doc.source_ref);
  CategoryPtr tgt = load("target", doc.target_ref);
  if (!(src->field == fp.working) || !(tgt->field == fp.working))
    rd.fail(header, "field", "functor field differs from its categories");

  FormalMorphism f;
  f.source = src->quiver;
  f.target = tgt->quiver;
  std::vector<int> omap(src->q().size(), -1);
  for (const auto& r : recs) {
    std::string k = rd.kind(r);
    if (k == "object_map") {
      int x = object_index(rd, r, "source", src->q(), rd.string(r, "source"));
      int y = object_index(rd, r, "target", tgt->q(), rd.string(r, "target"));
      if (omap[x] >= 0) rd.fail(r, "source", "object '" + src->q().object(x) + "' mapped twice");
      omap[x] = y;
    } else if (k != "functor" && k != "component") {
      rd.fail(r, "kind", "unknown record kind '" + k + "'");
    } else if (k == "functor" && &r != &header) {
      rd.fail(r, "kind", "duplicate functor header");
    }
  }
  for (int x = 0; x < src->q().size(); ++x)
    if (omap[x] < 0) rd.fail(header, "source", "object '" + src->q().object(x) + "' has no image");
  f.object_map = omap;
  for (const auto& r : recs) {
    if (rd.kind(r) != "component") continue;
    Tuple t = read_tuple(rd, r, src->q());
    SparseVec v = read_vector(rd, r, "output", tgt->q().hom(omap[t.first()], omap[t.last()]), fp);
    if (f.components.count(t)) rd.fail(r, "objects", "duplicate component entry");
    try {
      check_components(src->q(), tgt->q(), omap, {{t, v}}, 1);
    } catch (const StructuralError& e) {
      rd.fail(r, "output", e.what());
    }
    if (!v.empty()) f.components.emplace(t, std::move(v));
  }
  doc.functor = make_functor(src, tgt, std::move(f));
  return doc;
}

std::string serialize_functor(const AInftyFunctor& f, const std::string& source_ref, const std::string& target_ref) {
  const GradedQuiver& sq = f.source->q();
  const GradedQuiver& tq = f.target->q();
  std::vector<json> out;
  out.push_back({{"kind", "functor"}, {"field", f.source->field.name()}, {"source", source_ref}, {"target", target_ref}});
  for (int x = 0; x < sq.size(); ++x)
    out.push_back({{"kind", "object_map"}, {"source", sq.object(x)}, {"target", tq.object(f.f().object_map[x])}});
  for (const auto& [t, v] : f.f().components) {
    if (v.empty()) continue;
    out.push_back(
        {{"kind", "component"},
         {"arity", t.n()},
         {"objects", write_tuple_objects(sq, t)},
         {"inputs", write_tuple_inputs(sq, t)},
         {"output", write_vector(tq.hom(f.f().object_map[t.first()], f.f().object_map[t.last()]), v)}});
  }
  return lines(out);
}

std::vector<Certificate> parse_certificates(const std::string& text, const std::string& origin,
                                            const AInftyFunctor& f) {
  Reader rd(text, origin);
  FieldPlan fp{f.source->field, f.source->field};
  const GradedQuiver& sq = f.source->q();
  const GradedQuiver& tq = f.target->q();
  std::vector<Certificate> out;
  for (const auto& r : rd.records()) {
    Certificate c;
    c.kind = rd.kind(r);
    if (c.kind != "lift" && c.kind != "iso") rd.fail(r, "kind", "certificate kind must be \"lift\" or \"iso\"");
    c.source = rd.string(r, "source");
    c.target = rd.string(r, "target");
    int x = object_index(rd, r, "source", sq, c.source);
    int y = object_index(rd, r, "target", tq, c.target);
    const GradedSpace& iso_space = tq.hom(f.f().object_map[x], y);
    SparseVec iso = read_vector(rd, r, "iso", iso_space, fp);
    for (const auto& [i, s] : iso) c.iso.emplace_back(iso_space.name(i), s);
    if (c.kind == "lift") {
      c.lift_target = rd.string(r, "lift_target");
      int z = object_index(rd, r, "lift_target", sq, c.lift_target);
      const GradedSpace& lift_space = sq.hom(x, z);
      SparseVec lift = read_vector(rd, r, "lift", lift_space, fp);
      for (const auto& [i, s] : lift) c.lift.emplace_back(lift_space.name(i), s);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string serialize_certificates(const std::vector<Certificate>& certs, const Field& field) {
  auto pairs = [&](const std::vector<std::pair<std::string, Scalar>>& v) {
    json out = json::array();
    for (const auto& [name, s] : v) out.push_back(json::array({name, s.in(field).str()}));
    return out;
  };
  std::vector<json> out;
  for (const auto& c : certs) {
    json r{{"kind", c.kind}, {"source", c.source}, {"target", c.target}, {"iso", pairs(c.iso)}};
    if (c.kind == "lift") {
      r["lift_target"] = c.lift_target;
      r["lift"] = pairs(c.lift);
    }
    out.push_back(r);
  }
  return lines(out);
}

std::string serialize_report(const Report& r, const std::string& command) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}, {"required", c.required}});
  json out{{"command", command},
           {"verdict", to_string(r.overall())},
           {"max_arity", r.max_arity},
           {"total", r.total},
           {"checks", checks}};
  return out.dump(2) + "\n";
}

std::optional<std::string> document_kind(const std::string& text, const std::string& origin) {
  Reader rd(text, origin);
  if (rd.records().empty()) return std::nullopt;
  return rd.kind(rd.records().front());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot write file");
  out << text;
}

CategoryDocument Loader::category(const std::filesystem::path& path) {
  std::string key = std::filesystem::weakly_canonical(path).string();
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  CategoryDocument doc = parse_category(read_file(path), path.string(), opts_);
  cache_.emplace(key, doc);
  return doc;
}

FunctorDocument Loader::functor(const std::filesystem::path& path) {
  auto base = path.parent_path();
  return parse_functor(read_file(path), path.string(),
                       [&](const std::string& ref) { return category(base / ref).category; }, opts_);
}

}  // namespace ainf::io
