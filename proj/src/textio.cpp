#include "qport/textio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qport/errors.hpp"

namespace qport {

std::string format_g17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    return text;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(text.substr(start));
            return parts;
        }
        parts.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(std::string_view text, std::string_view where) {
    const std::string token(trim(text));
    if (token.empty())
        raise(ErrorCode::ParseError, std::string(where) + ": empty numeric field");
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE)
        raise(ErrorCode::ParseError,
              std::string(where) + ": bad numeric value '" + token + "'");
    return value;
}

std::uint64_t parse_u64(std::string_view text, std::string_view where) {
    const std::string token(trim(text));
    if (token.empty() || token[0] == '-')
        raise(ErrorCode::ParseError,
              std::string(where) + ": bad unsigned value '" + token + "'");
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || errno == ERANGE)
        raise(ErrorCode::ParseError,
              std::string(where) + ": bad unsigned value '" + token + "'");
    return value;
}

std::int64_t parse_i64(std::string_view text, std::string_view where) {
    const std::string token(trim(text));
    if (token.empty())
        raise(ErrorCode::ParseError, std::string(where) + ": empty integer field");
    errno = 0;
    char* end = nullptr;
    const long long value = std::strtoll(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || errno == ERANGE)
        raise(ErrorCode::ParseError,
              std::string(where) + ": bad integer value '" + token + "'");
    return value;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view where) {
    std::vector<double> values;
    for (const auto& part : split(text, ','))
        values.push_back(parse_double(part, where));
    return values;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorCode::ParseError, "cannot open file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out)
        raise(ErrorCode::IoError, "short write to '" + path.string() + "'");
}

} // namespace qport
