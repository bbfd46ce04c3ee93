#include "randcrit/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

#include "randcrit/parallel.hpp"

namespace randcrit {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RANDCRIT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  // snprintf honours LC_NUMERIC; the CSV contract is '.' always
  for (char& c : s) {
    if (c == ',') c = '.';
  }
  if (s == "-0") s = "0";
  return s;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace randcrit
