#include "codasim/timeutil.hpp"

#include <cctype>

namespace codasim {

namespace {

bool readInt(const std::string& s, size_t& pos, int digits, int& out) {
    int v = 0;
    for (int i = 0; i < digits; ++i) {
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
        v = v * 10 + (s[pos] - '0');
        ++pos;
    }
    out = v;
    return true;
}

bool expect(const std::string& s, size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c) return false;
    ++pos;
    return true;
}

} // namespace

bool parseTime(const std::string& text, TimePoint& out) {
    size_t pos = 0;
    int year, month, day, hour, minute, second = 0;
    if (!readInt(text, pos, 4, year)) return false;
    if (!expect(text, pos, '-')) return false;
    if (!readInt(text, pos, 2, month)) return false;
    if (!expect(text, pos, '-')) return false;
    if (!readInt(text, pos, 2, day)) return false;
    if (pos >= text.size() || (text[pos] != 'T' && text[pos] != ' ')) return false;
    ++pos;
    if (!readInt(text, pos, 2, hour)) return false;
    if (!expect(text, pos, ':')) return false;
    if (!readInt(text, pos, 2, minute)) return false;
    if (pos < text.size() && text[pos] == ':') {
        ++pos;
        if (!readInt(text, pos, 2, second)) return false;
    }
    if (pos != text.size()) return false;
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    if (hour > 23 || minute > 59 || second > 59) return false;
    out = makeTime(year, month, day, hour, minute, second);
    return true;
}

} // namespace codasim
