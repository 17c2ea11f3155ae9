#pragma once

// JSON reading and writing of group descriptors, words and homomorphisms.

#include <json.hpp>

#include <string>

#include "sigmacert/groups.hpp"

namespace sigmacert {

using Json = nlohmann::ordered_json;

inline constexpr const char* kGroupSchema = "sigmacert.group/1";

/// Parses a descriptor document. Syntax errors carry the byte offset.
GroupPtr parse_group(const std::string& text);
/// {"ref": "file.json"} entries resolve against base_dir.
GroupPtr group_from_json(const Json& doc, const std::string& location = "$", const std::string& base_dir = {});
Json to_json(const GroupDescriptor& g);
GroupPtr load_group(const std::string& path);

/// Words as arrays of "x", "x^-1", "x^3".
Word parse_word(const Json& arr, const std::vector<std::string>& generators, const std::string& location = "$");
Json word_to_json(const Word& w, const std::vector<std::string>& generators);

PropertyAssertion assertion_from_json(const Json& j, const std::string& location = "$");
Json to_json(const PropertyAssertion& a);

/// {"images": {"a": [...], ...}} or {"images": [[...], ...]}; the groups are supplied.
Homomorphism homomorphism_from_json(const Json& j, GroupPtr source, GroupPtr target, const std::string& location = "$");
Json to_json(const Homomorphism& phi);

/// Rationals are written as strings ("3", "-1/2"); integers are also accepted on input.
Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j, const std::string& location = "$");
Json vector_to_json(const QVector& v);
QVector vector_from_json(const Json& j, const std::string& location = "$");
Json vector_to_json(const ZVector& v);
Json matrix_to_json(const QMatrix& m);
QMatrix matrix_from_json(const Json& j, std::size_t cols, const std::string& location = "$");

Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text);

}  // namespace sigmacert
