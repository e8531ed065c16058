// vdfm/ids.hpp - instance data schema and SQL emission
#pragma once

#include <map>
#include <string>
#include <vector>

#include "vdfm/schema.hpp"

namespace vdfm
{

struct InstanceDataSchema
{
  std::string name;
  std::vector<RelationSchema> relations;  // VIFM document order
};

/// Materializes the single revision of every relation of a VIFM. Throws
/// WrongInput for other model kinds and AmbiguousInstance when a relation does
/// not carry exactly one version with exactly one revision.
InstanceDataSchema emit_ids(const ModelDocument & vifm);

/// `Name (field type, ..., ic-name constraint)` per relation, LF-terminated.
std::string render_ids(const InstanceDataSchema & ids);

/// Type word -> SQL column type.
using TypeMap = std::map<std::string, std::string, std::less<>>;

const TypeMap & default_type_map();

class UnmappableType : public Error
{
public:
  UnmappableType(const std::string & type, const std::string & relation, const std::string & field);
  [[nodiscard]] const std::string & type() const { return type_; }

private:
  std::string type_;
};

class DanglingFk : public Error
{
public:
  DanglingFk(const std::string & relation, const std::string & constraint, const std::string & why);
};

/// Column a key constraint sits on: its name without the `-Pk` / `-Fk` suffix.
std::string key_column(std::string_view ic_name);

/// ANSI DDL: one CREATE TABLE per relation, foreign keys added afterwards with
/// ALTER TABLE so that table order never matters.
std::string emit_sql(const InstanceDataSchema & ids, const TypeMap & types = default_type_map());

}  // namespace vdfm
