#include "model_file.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <vector>

namespace rnm::cli {

namespace {

namespace pt = boost::property_tree;

std::string required(const pt::ptree& tree, const std::string& key) {
  const auto value = tree.get_optional<std::string>(key);
  if (!value) throw ModelFileError(fmt::format("model file is missing '{}'", key));
  return boost::algorithm::trim_copy(*value);
}

template <typename T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ModelFileError(fmt::format("'{}': cannot parse '{}' as a number", key, text));
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = boost::algorithm::trim_copy(text.substr(start, comma - start));
    out.push_back(parse_number<T>(item, key));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

ModelFile parse_model(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ModelFileError(fmt::format("model file: {}", e.message()));
  }

  const int version = parse_number<int>(required(tree, "format_version"), "format_version");
  if (version != kModelFormatVersion)
    throw ModelFileError(fmt::format("unsupported format_version {} (expected {})", version,
                                     kModelFormatVersion));

  const auto expression_text = required(tree, "expression");
  const auto expression = parse_expression(expression_text);
  if (!expression) throw ModelFileError(fmt::format("unknown expression '{}'", expression_text));

  RankedFragment fragment(parse_list<int>(required(tree, "parent_states"), "parent_states"),
                          parse_number<int>(required(tree, "child_states"), "child_states"));
  WeightExpressionSpec spec(*expression, parse_list<double>(required(tree, "weights"), "weights"));
  GenerationParams params(parse_number<double>(required(tree, "variance"), "variance"),
                          parse_number<int>(required(tree, "sample_size"), "sample_size"));
  require_valid(spec, fragment);
  return {std::move(fragment), std::move(spec), params};
}

ModelFile read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelFileError(fmt::format("cannot open model file '{}'", path.string()));
  return parse_model(in);
}

}  // namespace rnm::cli
