#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "duality/errors.hpp"
#include "duality/imaging.hpp"

namespace duality {

namespace {

// Refuse headers that would allocate absurd buffers.
constexpr long long kMaxPixels = 1LL << 28;

void require_unit(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::invalid_argument("TransmittanceMap: value " + std::to_string(t) +
                                    " outside [0, 1]");
    }
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_header_token(std::istream& in) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            if (!token.empty()) {
                in.unget();
                break;
            }
            while ((c = in.get()) != EOF && c != '\n' && c != '\r') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!token.empty()) break;
            continue;
        }
        token.push_back(static_cast<char>(c));
    }
    return token;
}

long long parse_header_int(std::istream& in, const char* what) {
    const std::string token = next_header_token(in);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(std::string("PGM: malformed ") + what + " '" + token + "'");
    }
    return value;
}

double parse_decimal(std::string_view field, std::size_t row, std::size_t col) {
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) {
        field.remove_prefix(1);
    }
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) {
        field.remove_suffix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("CSV map: row " + std::to_string(row + 1) + ", column " +
                         std::to_string(col + 1) + ": not a number '" + std::string(field) +
                         "'");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ParseError("CSV map: row " + std::to_string(row + 1) + ", column " +
                         std::to_string(col + 1) + ": transmittance " + std::string(field) +
                         " outside [0, 1]");
    }
    return value;
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

} // namespace

TransmittanceMap::TransmittanceMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("TransmittanceMap: dimensions must be >= 1");
    }
    if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("TransmittanceMap: value count does not match dimensions");
    }
    std::for_each(values_.begin(), values_.end(), require_unit);
}

TransmittanceMap::TransmittanceMap(int width, int height, double fill)
    : TransmittanceMap(width, height,
                       std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                               static_cast<std::size_t>(std::max(height, 0)),
                                           fill)) {}

void TransmittanceMap::set(int x, int y, double t) {
    require_unit(t);
    values_.at(index(x, y)) = t;
}

TransmittanceMap read_pgm(std::istream& in) {
    const std::string magic = next_header_token(in);
    if (magic != "P2" && magic != "P5") {
        throw ParseError("PGM: expected magic P2 or P5, got '" + magic + "'");
    }
    const long long width = parse_header_int(in, "width");
    const long long height = parse_header_int(in, "height");
    const long long maxval = parse_header_int(in, "maxval");
    if (width < 1 || height < 1) throw ParseError("PGM: dimensions must be positive");
    if (width > kMaxPixels / height) {
        throw ParseError("PGM: dimensions " + std::to_string(width) + "x" +
                         std::to_string(height) + " exceed the supported size");
    }
    if (maxval < 1 || maxval > 255) {
        throw ParseError("PGM: maxval " + std::to_string(maxval) + " not in [1, 255]");
    }

    const auto count = static_cast<std::size_t>(width * height);
    std::vector<double> values(count);
    const auto scale = static_cast<double>(maxval);
    if (magic == "P5") {
        // next_header_token consumed the single whitespace byte after maxval.
        std::string raw(count, '\0');
        in.read(raw.data(), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) {
            throw ParseError("PGM: truncated raster, expected " + std::to_string(count) +
                             " bytes, got " + std::to_string(in.gcount()));
        }
        for (std::size_t i = 0; i < count; ++i) {
            const auto px = static_cast<unsigned char>(raw[i]);
            if (px > maxval) {
                throw ParseError("PGM: pixel " + std::to_string(i) + " value " +
                                 std::to_string(px) + " exceeds maxval");
            }
            values[i] = px / scale;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            std::string token;
            if (!(in >> token)) {
                throw ParseError("PGM: truncated raster at pixel " + std::to_string(i));
            }
            long long px = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), px);
            if (ec != std::errc() || ptr != token.data() + token.size()) {
                throw ParseError("PGM: malformed pixel '" + token + "'");
            }
            if (px < 0 || px > maxval) {
                throw ParseError("PGM: pixel " + std::to_string(i) + " value " +
                                 std::to_string(px) + " outside [0, maxval]");
            }
            values[i] = static_cast<double>(px) / scale;
        }
    }
    return TransmittanceMap(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

void write_pgm(const TransmittanceMap& map, std::ostream& out, PgmEncoding enc) {
    out << (enc == PgmEncoding::Binary ? "P5" : "P2") << '\n'
        << map.width() << ' ' << map.height() << "\n255\n";
    auto quantize = [](double t) { return static_cast<int>(std::lround(t * 255.0)); };
    if (enc == PgmEncoding::Binary) {
        std::string raw(map.size(), '\0');
        for (std::size_t i = 0; i < map.size(); ++i) {
            raw[i] = static_cast<char>(static_cast<unsigned char>(quantize(map.values()[i])));
        }
        out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
        return;
    }
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (x > 0) out << ' ';
            out << quantize(map.at(x, y));
        }
        out << '\n';
    }
}

TransmittanceMap read_csv_map(std::istream& in) {
    std::vector<double> values;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t cols = 0;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(parse_decimal(rest.substr(0, comma), rows, cols));
            ++cols;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (rows == 0) {
            width = cols;
        } else if (cols != width) {
            throw ParseError("CSV map: row " + std::to_string(rows + 1) + " has " +
                             std::to_string(cols) + " columns, expected " +
                             std::to_string(width));
        }
        ++rows;
        if (static_cast<long long>(values.size()) > kMaxPixels) {
            throw ParseError("CSV map: grid exceeds the supported size");
        }
    }
    if (rows == 0) throw ParseError("CSV map: no data rows");
    return TransmittanceMap(static_cast<int>(width), static_cast<int>(rows), std::move(values));
}

void write_csv_map(const TransmittanceMap& map, std::ostream& out) {
    char buf[32];
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (x > 0) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", map.at(x, y));
            out << buf;
        }
        out << '\n';
    }
}

TransmittanceMap load_map(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    const std::string ext = lower_extension(path);
    try {
        if (ext == ".csv") return read_csv_map(in);
        if (ext == ".pgm" || ext == ".pnm") return read_pgm(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    throw ParseError("'" + path.string() + "': unsupported map format (use .pgm or .csv)");
}

void save_map(const TransmittanceMap& map, const std::filesystem::path& path, PgmEncoding enc) {
    const std::string ext = lower_extension(path);
    if (ext != ".csv" && ext != ".pgm" && ext != ".pnm") {
        throw ParseError("'" + path.string() + "': unsupported map format (use .pgm or .csv)");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    if (ext == ".csv") {
        write_csv_map(map, out);
    } else {
        write_pgm(map, out, enc);
    }
    if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

double rmse(const TransmittanceMap& a, const TransmittanceMap& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("rmse: dimension mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a.values()[i] - b.values()[i];
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

} // namespace duality
