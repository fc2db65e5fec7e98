#include "pownum/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pownum::cli {

std::string signature_hash(const std::string& canonical) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<Checkpoint> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) return std::nullopt;
  Checkpoint cp;
  bool have_version = false, have_sig = false, have_cursor = false, have_hits = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    try {
      if (key == "format_version") {
        cp.format_version = std::stoull(val);
        have_version = true;
      } else if (key == "command_signature") {
        cp.command_signature = val;
        have_sig = true;
      } else if (key == "cursor") {
        cp.cursor = std::stoull(val);
        have_cursor = true;
      } else if (key == "hits_emitted") {
        cp.hits_emitted = std::stoull(val);
        have_hits = true;
      }
    } catch (const std::exception&) {
      throw std::runtime_error("checkpoint: malformed field '" + key + "' in " + path);
    }
  }
  if (!(have_version && have_sig && have_cursor && have_hits))
    throw std::runtime_error("checkpoint: missing fields in " + path);
  if (cp.format_version != 1)
    throw std::runtime_error("checkpoint: unsupported format_version in " + path);
  return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out.is_open())
      throw std::runtime_error("checkpoint: cannot write " + tmp);
    out << "format_version=" << cp.format_version << '\n'
        << "command_signature=" << cp.command_signature << '\n'
        << "cursor=" << cp.cursor << '\n'
        << "hits_emitted=" << cp.hits_emitted << '\n';
    out.flush();
    if (!out) throw std::runtime_error("checkpoint: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("checkpoint: rename failed for " + path);
}

}  // namespace pownum::cli
