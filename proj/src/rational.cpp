#include "pmm/rational.hpp"

#include <cctype>

#include "pmm/errors.hpp"

namespace pmm {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rat rat_from_string(const std::string& text) {
  std::string s = text;
  // trim
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw ParseError("empty rational literal");

  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = (s[0] == '-');
    s.erase(s.begin());
  }
  if (s.empty()) throw ParseError("bad rational literal: '" + text + "'");

  auto slash = s.find('/');
  auto dot = s.find('.');
  Rat out;
  if (slash != std::string::npos) {
    if (dot != std::string::npos) throw ParseError("bad rational literal: '" + text + "'");
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw ParseError("bad rational literal: '" + text + "'");
    mpz_class p(num, 10), q(den, 10);
    if (q == 0) throw ParseError("zero denominator in '" + text + "'");
    out = Rat(p, q);
    out.canonicalize();
  } else if (dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw ParseError("bad rational literal: '" + text + "'");
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw ParseError("bad rational literal: '" + text + "'");
    mpz_class p(ip.empty() ? "0" : ip, 10);
    mpz_class q = 1;
    for (char c : fp) {
      p = p * 10 + (c - '0');
      q *= 10;
    }
    out = Rat(p, q);
    out.canonicalize();
  } else {
    if (!all_digits(s)) throw ParseError("bad rational literal: '" + text + "'");
    out = Rat(mpz_class(s, 10));
  }
  if (neg) out = -out;
  return out;
}

std::string rat_to_string(const Rat& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

double rat_to_double(const Rat& v) { return v.get_d(); }

}  // namespace pmm
