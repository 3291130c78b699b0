#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "ainf/io.hpp"
#include "ainf/pullback.hpp"

namespace fs = std::filesystem;
using namespace ainf;

namespace {

constexpr int kExitPass = 0, kExitFail = 1, kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string field;
  std::uint32_t p = 0;
  std::optional<int> max_arity;
  bool strict = false;
  std::string certificates;
  std::string out;
};

std::optional<Field> working_field(const Options& o) {
  if (o.field.empty()) {
    if (o.p) throw UsageError("--p needs --field Fp");
    return std::nullopt;
  }
  try {
    if (o.field == "Fp") {
      if (!o.p) throw UsageError("--field Fp needs --p <prime>");
      return Field::prime(o.p);
    }
    if (o.p) throw UsageError("--p only applies to --field Fp");
    return Field::parse(o.field);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int exit_code(Verdict v, bool strict) {
  if (v == Verdict::fail) return kExitFail;
  if (v == Verdict::undecided && strict) return kExitFail;
  return kExitPass;
}

int arity_for(const Options& o, std::optional<int> declared, const std::vector<const GradedQuiver*>& quivers) {
  if (o.max_arity) return *o.max_arity;
  if (declared) return *declared;
  return default_max_arity(quivers);
}

class Session {
 public:
  explicit Session(const Options& o) : opts_(o), loader_(io::ReadOptions{working_field(o)}) {}

  io::FunctorDocument functor(const std::string& path) {
    auto doc = loader_.functor(path);
    for (const auto& ref : {doc.source_ref, doc.target_ref}) note(loader_.category(fs::path(path).parent_path() / ref));
    return doc;
  }
  io::CategoryDocument category(const std::string& path) {
    auto doc = loader_.category(path);
    note(doc);
    return doc;
  }
  int max_arity(const std::vector<const GradedQuiver*>& quivers) const { return arity_for(opts_, declared_, quivers); }

  // Reference to `target` as seen from the output directory.
  std::string ref_from_out(const fs::path& target) const {
    return fs::relative(fs::absolute(target), fs::absolute(out_dir())).generic_string();
  }
  fs::path out_dir() const { return opts_.out.empty() ? fs::path(".") : fs::path(opts_.out); }
  bool writing() const { return !opts_.out.empty(); }

  void write(const std::string& name, const std::string& text) const {
    if (!writing()) return;
    fs::create_directories(out_dir());
    io::write_file(out_dir() / name, text);
  }

  int finish(const Report& r, const std::string& command) const {
    std::string text = io::serialize_report(r, command);
    std::cout << text;
    write("report.json", text);
    return exit_code(r.overall(), opts_.strict);
  }

  const Options& options() const { return opts_; }

 private:
  void note(const io::CategoryDocument& d) {
    if (d.max_arity) declared_ = std::max(declared_.value_or(0), *d.max_arity);
  }

  Options opts_;
  io::Loader loader_;
  std::optional<int> declared_;
};

fs::path source_path(const std::string& functor_path, const std::string& ref) { return fs::path(functor_path).parent_path() / ref; }

void prefix_details(Report& r, const std::string& prefix) {
  for (auto& c : r.checks) c.detail = prefix + ": " + c.detail;
}

int cmd_validate(Session& s, const std::vector<std::string>& paths) {
  Report out;
  std::vector<std::pair<std::string, CategoryPtr>> cats;
  std::vector<std::pair<std::string, AInftyFunctor>> funs;
  std::vector<const GradedQuiver*> quivers;
  for (const auto& path : paths) {
    auto kind = io::document_kind(io::read_file(path), path);
    if (kind == "category") {
      cats.emplace_back(path, s.category(path).category);
      quivers.push_back(&cats.back().second->q());
    } else if (kind == "functor") {
      funs.emplace_back(path, s.functor(path).functor);
    } else {
      throw io::ParseError(path, 1, 1, "expected a category or functor document");
    }
  }
  for (const auto& [p, f] : funs) {
    quivers.push_back(&f.source->q());
    quivers.push_back(&f.target->q());
  }
  int n = s.max_arity(quivers);
  out.max_arity = n;
  out.total = is_total(quivers, n);
  for (const auto& [path, c] : cats) {
    Report r;
    r.add(validate_structure(*c, n));
    if (c->unital()) r.add(check_strict_units(*c, n));
    prefix_details(r, path);
    out.append(r);
  }
  for (const auto& [path, f] : funs) {
    Report r;
    r.add(validate_functor(f, n));
    if (f.source->unital() && f.target->unital()) r.add(check_functor_units(f, n));
    prefix_details(r, path);
    out.append(r);
  }
  return s.finish(out, "validate");
}

Pullback pullback_of(Session& s, const io::FunctorDocument& f, const io::FunctorDocument& g) {
  if (!(g.functor.target->q() == f.functor.target->q()))
    throw UsageError("G must have the same target category as F");
  int n = s.max_arity({&f.functor.source->q(), &f.functor.target->q(), &g.functor.source->q()});
  return build_pullback(f.functor, g.functor, n);
}

void write_pullback(const Session& s, const Pullback& p, const std::string& f_path, const io::FunctorDocument& f,
                    const std::string& g_path, const io::FunctorDocument& g) {
  s.write("pullback.jsonl", io::serialize_category(*p.category, p.max_arity));
  s.write("alpha.jsonl", io::serialize_functor(p.alpha, "pullback.jsonl", s.ref_from_out(source_path(g_path, g.source_ref))));
  s.write("beta.jsonl", io::serialize_functor(p.beta, "pullback.jsonl", s.ref_from_out(source_path(f_path, f.source_ref))));
}

ClassifyOptions classify_options(const Session& s, const AInftyFunctor& f) {
  ClassifyOptions opts;
  const std::string& path = s.options().certificates;
  if (!path.empty()) opts.certificates = io::parse_certificates(io::read_file(path), path, f);
  return opts;
}

int cmd_pullback(Session& s, const std::string& f_path, const std::string& g_path) {
  auto f = s.functor(f_path);
  auto g = s.functor(g_path);
  F1Result f1 = check_F1(f.functor);
  if (!f1.splits) {
    Report r;
    r.add(f1.check);
    return s.finish(r, "pullback");
  }
  Pullback p = pullback_of(s, f, g);
  write_pullback(s, p, f_path, f, g_path, g);
  Report r = certify_pullback(p);
  Report closure = certify_fibration_closure(p, classify_options(s, f.functor));
  for (auto& c : closure.checks) c.name = "closure." + c.name;
  r.append(closure);
  return s.finish(r, "pullback");
}

int cmd_classify(Session& s, const std::string& f_path) {
  auto f = s.functor(f_path);
  Report r = classify(f.functor, classify_options(s, f.functor));
  r.max_arity = 1;
  r.total = true;  // every clause is decided on arity-1 data and H^0
  return s.finish(r, "classify");
}

int cmd_induce(Session& s, const std::vector<std::string>& paths) {
  auto f = s.functor(paths[0]);
  auto g = s.functor(paths[1]);
  auto i = s.functor(paths[2]);
  auto l = s.functor(paths[3]);
  Pullback p = pullback_of(s, f, g);
  InducedFunctor n = induce_functor(p, i.functor, l.functor);
  write_pullback(s, p, paths[0], f, paths[1], g);
  s.write("induced.jsonl", io::serialize_functor(n.functor, s.ref_from_out(source_path(paths[2], i.source_ref)), "pullback.jsonl"));
  n.report.total = is_total({&f.functor.source->q(), &f.functor.target->q(), &g.functor.source->q(),
                             &i.functor.source->q()}, p.max_arity);
  return s.finish(n.report, "induce");
}

int cmd_strictify(Session& s, const std::string& f_path) {
  auto f = s.functor(f_path);
  F1Result f1 = check_F1(f.functor);
  if (!f1.splits) {
    Report r;
    r.add(f1.check);
    return s.finish(r, "strictify");
  }
  int n = s.max_arity({&f.functor.source->q(), &f.functor.target->q()});
  SplitModel model = build_split_model(f.functor, *f1.splits);
  Strictification st = strictify(model, n);
  std::string src = s.ref_from_out(source_path(f_path, f.source_ref));
  std::string tgt = s.ref_from_out(source_path(f_path, f.target_ref));
  s.write("transported.jsonl", io::serialize_category(*st.transported, n));
  s.write("model.jsonl", io::serialize_category(*st.model, n));
  s.write("phi.jsonl", io::serialize_functor(st.phi_functor, src, "transported.jsonl"));
  s.write("psi.jsonl", io::serialize_functor(make_functor(st.transported, f.functor.source, *st.psi), "transported.jsonl", src));
  s.write("projection.jsonl", io::serialize_functor(st.projection, "model.jsonl", tgt));
  return s.finish(certify_strictification(model, st, n), "strictify");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact A-infinity pullbacks: validation, construction and certification"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--field", o.field, "Coefficient field: Q or Fp (with --p)");
  app.add_option("--p", o.p, "Characteristic for --field Fp");
  app.add_option("--max-arity", o.max_arity, "Arity bound for verification and construction")
      ->check(CLI::Range(1, kMaxArity));
  app.add_flag("--strict", o.strict, "Treat undecided verdicts as failures");
  app.add_option("--certificates", o.certificates, "JSON Lines file of lift/iso certificates");
  app.add_option("--out", o.out, "Directory for written documents and report.json");

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Check structures, functors and units");
  validate->add_option("documents", validate_paths)->required();

  std::string f_path, g_path;
  auto* pb = app.add_subcommand("pullback", "Build and certify the pullback of F along G");
  pb->add_option("F", f_path)->required();
  pb->add_option("G", g_path)->required();

  std::string c_path;
  auto* cl = app.add_subcommand("classify", "Report F1, F2, quasi-equivalence and kernel acyclicity");
  cl->add_option("F", c_path)->required();

  std::vector<std::string> induce_paths;
  auto* in = app.add_subcommand("induce", "Functor into the pullback from a cone (I, L)");
  in->add_option("documents", induce_paths, "F G I L")->required()->expected(4);

  std::string s_path;
  auto* st = app.add_subcommand("strictify", "Strictify an F1 functor");
  st->add_option("F", s_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Session s(o);
    if (*validate) return cmd_validate(s, validate_paths);
    if (*pb) return cmd_pullback(s, f_path, g_path);
    if (*cl) return cmd_classify(s, c_path);
    if (*in) return cmd_induce(s, induce_paths);
    if (*st) return cmd_strictify(s, s_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConeError& e) {
    std::cerr << "cone error: " << e.what() << "\n";
    return kExitFail;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
