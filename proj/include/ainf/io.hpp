#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "ainf/ainfty.hpp"

namespace ainf::io {

/// A document error with its location: "<origin>:<line>:<column>: <message>".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string origin, int line, int column, const std::string& message);
  const std::string& origin() const { return origin_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string origin_;
  int line_, column_;
};

/// Field handling when reading: a Q document may be read into F_p by
/// reduction; any other mismatch is an error.
struct ReadOptions {
  std::optional<Field> field;
};

struct CategoryDocument {
  CategoryPtr category;
  std::optional<int> max_arity;
};

/// One JSON record per line:
///   {"kind":"category","field":"Q","max_arity":5}
///   {"kind":"object","name":"x"}
///   {"kind":"basis","source":"x","target":"y","name":"f","degree":0}
///   {"kind":"op","arity":2,"objects":[x2,x1,x0],"inputs":[f2,f1],"output":[["g","1/2"]]}
///   {"kind":"unit","object":"x","value":[["1","1"]]}
/// Objects and inputs are listed in argument order (last object first).
CategoryDocument parse_category(const std::string& text, const std::string& origin, const ReadOptions& opts = {});
std::string serialize_category(const AInftyCategory& c, std::optional<int> max_arity = std::nullopt);

struct FunctorDocument {
  AInftyFunctor functor;
  std::string source_ref;
  std::string target_ref;
};

/// Resolves a category reference found in a functor document.
using CategoryResolver = std::function<CategoryPtr(const std::string& ref)>;

///   {"kind":"functor","field":"Q","source":"a.jsonl","target":"b.jsonl"}
///   {"kind":"object_map","source":"x","target":"x'"}
///   {"kind":"component","arity":1,"objects":[y,x],"inputs":[f],"output":[["f'","1"]]}
FunctorDocument parse_functor(const std::string& text, const std::string& origin, const CategoryResolver& resolve,
                              const ReadOptions& opts = {});
std::string serialize_functor(const AInftyFunctor& f, const std::string& source_ref, const std::string& target_ref);

///   {"kind":"lift","source":"x","target":"y'","iso":[...],"lift_target":"y","lift":[...]}
///   {"kind":"iso","source":"x","target":"y'","iso":[...]}
/// Names are checked against the functor.
std::vector<Certificate> parse_certificates(const std::string& text, const std::string& origin,
                                            const AInftyFunctor& f);
std::string serialize_certificates(const std::vector<Certificate>& certs, const Field& field);

/// Canonical JSON for a report (sorted keys, two-space indent, trailing newline).
std::string serialize_report(const Report& r, const std::string& command);

/// First record's "kind", or nullopt for an empty document.
std::optional<std::string> document_kind(const std::string& text, const std::string& origin);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Loads categories by path, caching by canonical path; functor references
/// are resolved relative to the referring document.
class Loader {
 public:
  explicit Loader(ReadOptions opts = {}) : opts_(opts) {}
  CategoryDocument category(const std::filesystem::path& path);
  FunctorDocument functor(const std::filesystem::path& path);

 private:
  ReadOptions opts_;
  std::map<std::string, CategoryDocument> cache_;
};

}  // namespace ainf::io
