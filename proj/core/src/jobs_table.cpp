#include "neuroprobe/jobs_table.hpp"

#include <algorithm>

namespace neuroprobe {

const std::vector<ReferenceLanguage>& reference_languages() {
  static const std::vector<ReferenceLanguage> table = {
      {"ara", "Arabic", "Afro-Asiatic",
       {"Gender", "Voice", "Mood", "Part of Speech", "Aspect", "Person", "Number", "Case", "Definiteness"}},
      {"heb", "Hebrew", "Afro-Asiatic", {"Part of Speech", "Number", "Tense", "Person", "Voice"}},
      {"vie", "Vietnamese", "Austroasiatic", {"Part of Speech"}},
      {"tam", "Tamil", "Dravidian",
       {"Part of Speech", "Number", "Gender", "Case", "Person", "Finiteness", "Tense"}},
      {"afr", "Afrikaans", "Indo-European", {"Part of Speech", "Number", "Tense"}},
      {"bel", "Belarusian", "Indo-European",
       {"Part of Speech", "Tense", "Number", "Aspect", "Finiteness", "Voice", "Gender", "Animacy", "Case",
        "Person"}},
      {"bul", "Bulgarian", "Indo-European",
       {"Part of Speech", "Definiteness", "Gender", "Number", "Mood", "Tense", "Person", "Voice", "Comparison"}},
      {"cat", "Catalan", "Indo-European",
       {"Gender", "Number", "Part of Speech", "Tense", "Mood", "Person", "Aspect"}},
      {"ces", "Czech", "Indo-European",
       {"Part of Speech", "Number", "Case", "Comparison", "Gender", "Mood", "Person", "Tense", "Aspect",
        "Polarity", "Animacy", "Possession", "Voice"}},
      {"dan", "Danish", "Indo-European",
       {"Part of Speech", "Number", "Gender", "Definiteness", "Voice", "Tense", "Mood", "Comparison"}},
      {"deu", "German", "Indo-European", {"Part of Speech", "Case", "Number", "Tense", "Person", "Comparison"}},
      {"ell", "Greek", "Indo-European",
       {"Part of Speech", "Case", "Gender", "Number", "Finiteness", "Person", "Tense", "Aspect", "Mood", "Voice",
        "Comparison"}},
      {"eng", "English", "Indo-European", {"Part of Speech", "Number", "Tense", "Case", "Comparison"}},
      {"fas", "Persian", "Indo-European", {"Number", "Part of Speech", "Tense", "Person", "Mood", "Comparison"}},
      {"fra", "French", "Indo-European",
       {"Part of Speech", "Number", "Gender", "Tense", "Mood", "Person", "Polarity", "Aspect"}},
      {"gle", "Irish", "Indo-European",
       {"Tense", "Mood", "Part of Speech", "Number", "Person", "Gender", "Case"}},
      {"glg", "Galician", "Indo-European", {"Part of Speech"}},
      {"hin", "Hindi", "Indo-European",
       {"Person", "Case", "Part of Speech", "Number", "Gender", "Voice", "Aspect", "Mood", "Finiteness",
        "Politeness"}},
      {"hrv", "Croatian", "Indo-European",
       {"Case", "Gender", "Number", "Part of Speech", "Person", "Finiteness", "Mood", "Tense", "Animacy",
        "Definiteness", "Comparison", "Voice"}},
      {"ita", "Italian", "Indo-European",
       {"Part of Speech", "Number", "Gender", "Person", "Mood", "Tense", "Aspect"}},
      {"lat", "Latin", "Indo-European",
       {"Part of Speech", "Number", "Gender", "Case", "Tense", "Person", "Mood", "Aspect", "Comparison"}},
      {"lav", "Latvian", "Indo-European",
       {"Part of Speech", "Case", "Number", "Tense", "Mood", "Person", "Gender", "Definiteness", "Aspect",
        "Comparison", "Voice"}},
      {"lit", "Lithuanian", "Indo-European",
       {"Tense", "Voice", "Number", "Part of Speech", "Finiteness", "Mood", "Polarity", "Person", "Gender",
        "Case", "Definiteness"}},
      {"mar", "Marathi", "Indo-European",
       {"Case", "Gender", "Number", "Part of Speech", "Person", "Aspect", "Tense", "Finiteness"}},
      {"nld", "Dutch", "Indo-European",
       {"Person", "Part of Speech", "Number", "Gender", "Finiteness", "Tense", "Case", "Comparison"}},
      {"pol", "Polish", "Indo-European",
       {"Part of Speech", "Case", "Number", "Animacy", "Gender", "Aspect", "Tense", "Person", "Polarity",
        "Voice"}},
      {"por", "Portuguese", "Indo-European",
       {"Part of Speech", "Person", "Mood", "Number", "Tense", "Gender", "Aspect"}},
      {"ron", "Romanian", "Indo-European",
       {"Definiteness", "Number", "Part of Speech", "Person", "Aspect", "Mood", "Case", "Gender", "Tense"}},
      {"rus", "Russian", "Indo-European",
       {"Part of Speech", "Case", "Gender", "Number", "Animacy", "Tense", "Finiteness", "Aspect", "Person",
        "Voice", "Comparison"}},
      {"slk", "Slovak", "Indo-European",
       {"Part of Speech", "Gender", "Case", "Number", "Aspect", "Polarity", "Tense", "Voice", "Animacy",
        "Finiteness", "Person", "Mood", "Comparison"}},
      {"slv", "Slovenian", "Indo-European",
       {"Number", "Gender", "Part of Speech", "Case", "Mood", "Person", "Finiteness", "Aspect", "Animacy",
        "Definiteness", "Comparison"}},
      {"spa", "Spanish", "Indo-European",
       {"Part of Speech", "Tense", "Aspect", "Mood", "Number", "Person", "Gender"}},
      {"srp", "Serbian", "Indo-European",
       {"Number", "Part of Speech", "Gender", "Case", "Person", "Tense", "Definiteness", "Animacy",
        "Comparison"}},
      {"swe", "Swedish", "Indo-European",
       {"Part of Speech", "Gender", "Number", "Definiteness", "Case", "Tense", "Mood", "Voice", "Comparison"}},
      {"ukr", "Ukrainian", "Indo-European",
       {"Case", "Number", "Part of Speech", "Gender", "Tense", "Animacy", "Person", "Aspect", "Voice",
        "Comparison"}},
      {"urd", "Urdu", "Indo-European",
       {"Case", "Number", "Part of Speech", "Person", "Finiteness", "Voice", "Mood", "Politeness", "Aspect"}},
      {"jpn", "Japanese", "Japonic", {"Part of Speech"}},
      {"eus", "Basque", "Language isolate",
       {"Part of Speech", "Case", "Animacy", "Definiteness", "Number", "Argument Marking", "Aspect",
        "Comparison"}},
      {"zho", "Chinese", "Sino-Tibetan", {"Part of Speech"}},
      {"tur", "Turkish", "Turkic",
       {"Case", "Number", "Part of Speech", "Aspect", "Person", "Mood", "Tense", "Polarity", "Possession",
        "Politeness"}},
      {"est", "Estonian", "Uralic",
       {"Part of Speech", "Mood", "Finiteness", "Tense", "Voice", "Number", "Person", "Case"}},
      {"fin", "Finnish", "Uralic",
       {"Part of Speech", "Case", "Number", "Mood", "Person", "Voice", "Tense", "Possession", "Comparison"}},
  };
  return table;
}

std::vector<std::string> reference_languages_for(std::string_view category) {
  std::vector<std::string> out;
  for (const auto& lang : reference_languages()) {
    if (std::find(lang.categories.begin(), lang.categories.end(), category) != lang.categories.end()) {
      out.emplace_back(lang.code);
    }
  }
  return out;
}

std::string category_slug(std::string_view category) {
  if (category == "Part of Speech") return "POS";
  std::string out;
  for (char c : category) {
    if (c != ' ') out += c;
  }
  return out;
}

}  // namespace neuroprobe
