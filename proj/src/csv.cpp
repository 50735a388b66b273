#include "spnls/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spnls/error.hpp"

namespace spnls::csv {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num(long long v) { return std::to_string(v); }

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add(std::vector<std::string> row) {
    require(row.size() == header_.size(), ErrorKind::DimensionMismatch, "csv row width differs from header");
    rows_.push_back(std::move(row));
}

std::string Table::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += r[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void Table::write(const std::string& path) const { write_text(path, str()); }

Table parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) out.push_back(cell);
        if (!s.empty() && s.back() == ',') out.emplace_back();
        return out;
    };
    require(static_cast<bool>(std::getline(in, line)), ErrorKind::MalformedHeader, "empty csv");
    Table t(split(line));
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') t.add(split(line));
    return t;
}

Table read(const std::string& path) { return parse(read_text(path)); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Config, "cannot write " + path);
    out << text;
    require(static_cast<bool>(out), ErrorKind::Config, "write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Config, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace spnls::csv
