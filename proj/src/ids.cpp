// vdfm/ids.cpp - instance data schema and SQL emission
#include "vdfm/ids.hpp"

#include "vdfm/derive.hpp"

namespace vdfm
{

InstanceDataSchema emit_ids(const ModelDocument & vifm)
{
  if (vifm.kind != ModelKind::Vifm) {
    throw WrongInput("schema generation needs a VIFM, got " + std::string(to_string(vifm.kind)) + " " + vifm.name);
  }
  InstanceDataSchema ids;
  ids.name = vifm.name;
  if (!vifm.sdfm) {
    return ids;
  }
  std::vector<std::string> ambiguous;
  std::vector<FeaturePath> revisions;
  for (const auto & rel : vifm.sdfm->relations) {
    if (rel.children.size() != 1 || rel.children.front().children.size() != 1) {
      ambiguous.push_back(rel.name);
      continue;
    }
    const auto & ver = rel.children.front();
    revisions.push_back(FeaturePath{rel.name, ver.name, ver.children.front().name});
  }
  if (!ambiguous.empty()) {
    throw AmbiguousInstance(std::move(ambiguous));
  }
  Replayer replayer(vifm, /*strict=*/true);
  for (const auto & rev : revisions) {
    ids.relations.push_back(replayer.schema_at(rev));
  }
  return ids;
}

std::string render_ids(const InstanceDataSchema & ids)
{
  std::string out;
  for (const auto & rel : ids.relations) {
    std::string entries;
    for (const auto & f : rel.fields) {
      entries += (entries.empty() ? "" : ", ") + f.name + " " + f.payload;
    }
    for (const auto & c : rel.constraints) {
      entries += (entries.empty() ? "" : ", ") + c.name + " constraint";
    }
    out += rel.relation_name + " (" + entries + ")\n";
  }
  return out;
}

const TypeMap & default_type_map()
{
  static const TypeMap map = {
    {"string", "VARCHAR(255)"}, {"float", "REAL"}, {"number", "NUMERIC"}, {"integer", "INTEGER"},
    {"text", "TEXT"},           {"date", "DATE"},  {"boolean", "BOOLEAN"},
  };
  return map;
}

UnmappableType::UnmappableType(const std::string & type, const std::string & relation, const std::string & field)
: Error("UnmappableType", "no SQL type for type word " + type + " (" + relation + "." + field + ")"), type_(type)
{
}

DanglingFk::DanglingFk(const std::string & relation, const std::string & constraint, const std::string & why)
: Error("DanglingFk", "foreign key " + relation + "." + constraint + " " + why)
{
}

std::string key_column(std::string_view ic_name)
{
  if (key_suffix(ic_name) != KeySuffix::Other) {
    ic_name.remove_suffix(3);
  }
  return std::string(ic_name);
}

namespace
{

std::string q(std::string_view id)
{
  std::string s = "\"";
  for (char c : id) {
    s += c;
    if (c == '"') {
      s += '"';
    }
  }
  return s + "\"";
}

struct Column
{
  std::string name;
  std::string type;
  bool not_null = false;
};

const RelationSchema * relation(const InstanceDataSchema & ids, const std::string & name)
{
  for (const auto & r : ids.relations) {
    if (r.relation_name == name) {
      return &r;
    }
  }
  return nullptr;
}

const std::string kKeyType = "VARCHAR(255)";

// Type of the column behind `rel`'s key `pk`: the field's own type when a
// field of that name exists, otherwise the synthesized key type.
std::string key_type(const RelationSchema & rel, const std::string & pk, const TypeMap & types)
{
  const std::string col = key_column(pk);
  for (const auto & f : rel.fields) {
    if (f.name == col) {
      const auto it = types.find(f.payload);
      if (it == types.end()) {
        throw UnmappableType(f.payload, rel.relation_name, f.name);
      }
      return it->second;
    }
  }
  return kKeyType;
}

}  // namespace

std::string emit_sql(const InstanceDataSchema & ids, const TypeMap & types)
{
  std::string out;
  std::string alters;
  for (const auto & rel : ids.relations) {
    std::vector<Column> columns;
    for (const auto & f : rel.fields) {
      const auto it = types.find(f.payload);
      if (it == types.end()) {
        throw UnmappableType(f.payload, rel.relation_name, f.name);
      }
      columns.push_back({f.name, it->second, false});
    }
    auto column = [&](const std::string & name, const std::string & type) -> Column & {
      for (auto & c : columns) {
        if (c.name == name) {
          return c;
        }
      }
      columns.push_back({name, type, false});
      return columns.back();
    };
    std::vector<std::string> table_constraints;
    bool have_primary = false;
    for (const auto & c : rel.constraints) {
      switch (c.suffix()) {
        case KeySuffix::Pk: {
          const std::string col = key_column(c.name);
          column(col, kKeyType).not_null = true;
          table_constraints.push_back(
            "CONSTRAINT " + q(c.name) + (have_primary ? " UNIQUE (" : " PRIMARY KEY (") + q(col) + ")");
          have_primary = true;
          break;
        }
        case KeySuffix::Fk: {
          if (!c.references) {
            throw DanglingFk(rel.relation_name, c.name, "has no known target key (declare it with `references Rel.Key-Pk`)");
          }
          const RelationSchema * target = relation(ids, c.references->relation);
          if (target == nullptr) {
            throw DanglingFk(rel.relation_name, c.name, "references " + c.references->relation + ", which is not part of this schema");
          }
          if (target->find(c.references->key) == nullptr) {
            throw DanglingFk(rel.relation_name, c.name, "references missing key " + c.references->relation + "." + c.references->key);
          }
          const std::string col = key_column(c.name);
          column(col, key_type(*target, c.references->key, types));
          alters += "ALTER TABLE " + q(rel.relation_name) + " ADD CONSTRAINT " + q(c.name) + " FOREIGN KEY (" + q(col) +
                    ") REFERENCES " + q(c.references->relation) + " (" + q(key_column(c.references->key)) + ");\n";
          break;
        }
        case KeySuffix::Other:
          if (c.payload.empty()) {
            table_constraints.push_back("-- " + c.name + ": constraint without expression");
          } else {
            table_constraints.push_back("CONSTRAINT " + q(c.name) + " CHECK (" + c.payload + ")");
          }
          break;
      }
    }
    std::vector<std::string> lines;
    for (const auto & c : columns) {
      lines.push_back(q(c.name) + " " + c.type + (c.not_null ? " NOT NULL" : ""));
    }
    lines.insert(lines.end(), table_constraints.begin(), table_constraints.end());
    if (!out.empty()) {
      out += "\n";
    }
    out += "CREATE TABLE " + q(rel.relation_name) + " (\n";
    // Comment lines take no comma; the last real entry must not end with one.
    std::size_t last = lines.size();
    for (std::size_t i = lines.size(); i-- > 0;) {
      if (!lines[i].starts_with("--")) {
        last = i;
        break;
      }
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const bool comment = lines[i].starts_with("--");
      out += "    " + lines[i] + (comment || i == last ? "" : ",") + "\n";
    }
    out += ");\n";
  }
  if (!alters.empty()) {
    out += "\n" + alters;
  }
  return out;
}

}  // namespace vdfm
