#include "bayestab/table_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace bayestab {

namespace {

std::vector<long long> parse_row(const std::string& line, int line_no) {
    std::string cleaned = line;
    for (char& c : cleaned)
        if (c == ',' || c == '\t' || c == '\r') c = ' ';
    std::istringstream ss(cleaned);
    std::vector<long long> row;
    std::string tok;
    while (ss >> tok) {
        try {
            size_t used = 0;
            const long long v = std::stoll(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            row.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(line_no) + ": not an integer: '" + tok + "'");
        }
    }
    return row;
}

}  // namespace

ContingencyTable parse_table(std::istream& in) {
    std::vector<std::vector<std::vector<long long>>> blocks;
    std::vector<std::vector<long long>> current;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t first = line.find_first_not_of(" \t\r");
        if (first != std::string::npos && line[first] == '#') continue;
        const std::vector<long long> row = parse_row(line, line_no);
        if (row.empty()) {
            if (!current.empty()) blocks.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(row);
        }
    }
    if (!current.empty()) blocks.push_back(std::move(current));
    if (blocks.empty()) throw ParseError("no table rows found");

    for (const auto& block : blocks)
        for (const auto& row : block)
            if (row.size() != block[0].size())
                throw ParseError("ragged rows within a stratum");

    if (blocks.size() == 1) {
        const auto& b = blocks[0];
        const int r = static_cast<int>(b.size());
        const int c = static_cast<int>(b[0].size());
        std::vector<long long> cells;
        cells.reserve(static_cast<size_t>(r) * c);
        for (const auto& row : b) cells.insert(cells.end(), row.begin(), row.end());
        try {
            return ContingencyTable(std::move(cells), {r, c});
        } catch (const InputError& e) {
            throw ParseError(e.what());
        }
    }
    if (blocks.size() == 2) {
        for (const auto& b : blocks)
            if (b.size() != 2 || b[0].size() != 2)
                throw ParseError("stratified input requires two 2x2 blocks");
        std::vector<long long> cells;
        cells.reserve(8);
        for (const auto& b : blocks)
            for (const auto& row : b) cells.insert(cells.end(), row.begin(), row.end());
        try {
            return ContingencyTable(std::move(cells), {2, 2, 2});
        } catch (const InputError& e) {
            throw ParseError(e.what());
        }
    }
    throw ParseError("expected one RxC block or two 2x2 blocks, got " +
                     std::to_string(blocks.size()) + " blocks");
}

ContingencyTable parse_table_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open table file: " + path);
    return parse_table(f);
}

}  // namespace bayestab
