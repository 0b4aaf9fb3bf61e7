#include "varq/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace varq::csv {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, res.ptr);
}

std::string quote_field(const std::string& field) {
    const bool needs_quoting =
        field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quoting) return field;
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

namespace {

std::string join_quoted(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) line.push_back(',');
        line += quote_field(fields[i]);
    }
    return line;
}

}  // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) {
        throw std::invalid_argument("csv::Table: at least one column required");
    }
}

void Table::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) {
        throw std::invalid_argument("csv::Table: row width does not match header");
    }
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_double(v));
    rows_.push_back(join_quoted(fields));
}

void Table::add_row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_.size()) {
        throw std::invalid_argument("csv::Table: row width does not match header");
    }
    rows_.push_back(join_quoted(fields));
}

std::string Table::body() const {
    std::string out = join_quoted(columns_);
    out.push_back('\n');
    for (const std::string& row : rows_) {
        out += row;
        out.push_back('\n');
    }
    return out;
}

void Table::write(const std::string& path) const {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("csv::Table: cannot open " + path);
    }
    file << body();
    if (!file) {
        throw std::runtime_error("csv::Table: write failed for " + path);
    }
}

}  // namespace varq::csv
