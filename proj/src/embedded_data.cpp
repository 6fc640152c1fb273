#include <map>
#include <stdexcept>
#include <string>

namespace tetdisp {

const std::string& embedded_file(const std::string& name) {
  static const std::map<std::string, std::string> files = {
#include "tetdisp_embedded_data.inc"
  };
  const auto it = files.find(name);
  if (it == files.end()) throw std::invalid_argument("no embedded data file '" + name + "'");
  return it->second;
}

}  // namespace tetdisp
