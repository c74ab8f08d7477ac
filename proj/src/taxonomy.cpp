#include "t2ploc/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "t2ploc/error.hpp"

namespace t2p {

std::string_view kind_name(Kind k) noexcept { return k == Kind::Object ? "object" : "stuff"; }

Kind parse_kind(std::string_view s) {
  if (s == "object") return Kind::Object;
  if (s == "stuff") return Kind::Stuff;
  throw Error(ErrorCode::Taxonomy, "kind must be 'object' or 'stuff', got '" + std::string(s) + "'");
}

void Taxonomy::add(LabelInfo info) {
  if (info.name.empty()) {
    throw Error(ErrorCode::Taxonomy, "label " + std::to_string(info.id) + " has an empty name");
  }
  std::transform(info.name.begin(), info.name.end(), info.name.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  const auto id = info.id;
  if (!labels_.emplace(id, std::move(info)).second) {
    throw Error(ErrorCode::Taxonomy, "duplicate label id " + std::to_string(id));
  }
}

Taxonomy Taxonomy::from_json(std::string_view text) {
  Taxonomy tax;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& entry : doc.at("labels")) {
      const int id = entry.at("id").get<int>();
      if (id < 0 || id > 65535) {
        throw Error(ErrorCode::Taxonomy, "label id " + std::to_string(id) + " out of range");
      }
      tax.add({static_cast<std::uint16_t>(id), entry.at("name").get<std::string>(),
               parse_kind(entry.at("kind").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("taxonomy JSON: ") + e.what(), "taxonomy");
  }
  return tax;
}

Taxonomy Taxonomy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open taxonomy " + path.string(), "taxonomy");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

const LabelInfo* Taxonomy::find(std::uint16_t id) const {
  const auto it = labels_.find(id);
  return it == labels_.end() ? nullptr : &it->second;
}

const LabelInfo& Taxonomy::at(std::uint16_t id) const {
  if (const auto* info = find(id)) return *info;
  throw Error(ErrorCode::Taxonomy, "semantic id " + std::to_string(id) + " is not in the taxonomy");
}

const LabelInfo* Taxonomy::find_by_name(std::string_view name) const {
  for (const auto& [id, info] : labels_) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

}  // namespace t2p
