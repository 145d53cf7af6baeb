#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace neuroprobe {

/// One probed language of the reference study and the categories probed in it.
struct ReferenceLanguage {
  std::string_view code;
  std::string_view name;
  std::string_view family;
  std::vector<std::string_view> categories;
};

const std::vector<ReferenceLanguage>& reference_languages();

/// Languages of the reference table in which `category` is probed.
std::vector<std::string> reference_languages_for(std::string_view category);

/// Category names as they appear in dataset file names ("Part of Speech" -> "POS").
std::string category_slug(std::string_view category);

}  // namespace neuroprobe
