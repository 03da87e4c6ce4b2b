#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bb84/protocol.hpp"

namespace bb84 {
namespace {

std::vector<bool> mark(const std::vector<std::size_t>& indices, std::size_t n) {
  std::vector<bool> flags(n, false);
  for (std::size_t i : indices) flags[i] = true;
  return flags;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw std::runtime_error("transcript line " + std::to_string(line_no) + ": " + why);
}

Bit parse_bit(const std::string& f, std::size_t line_no) {
  if (f == "0") return Bit::zero;
  if (f == "1") return Bit::one;
  malformed(line_no, "bad bit '" + f + "'");
}

Basis parse_basis(const std::string& f, std::size_t line_no) {
  if (f == "Z") return Basis::Z;
  if (f == "X") return Basis::X;
  malformed(line_no, "bad basis '" + f + "'");
}

std::optional<Symbol> parse_symbol(const std::string& f, std::size_t line_no) {
  if (f == "-") return std::nullopt;
  for (Symbol s : kSymbols) {
    if (symbol_name(s) == f) return s;
  }
  malformed(line_no, "bad symbol '" + f + "'");
}

}  // namespace

void write_transcript(std::ostream& out, const Transcript& t) {
  const auto sifted = mark(t.sifted_indices, t.records.size());
  const auto disclosed = mark(t.disclosed_indices, t.records.size());
  out << "# format_version=1\n"
      << "# index,alice_bit,alice_basis,eve_symbol,bob_basis,bob_bit,sifted,disclosed\n";
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const QubitRecord& r = t.records[i];
    out << i << ',' << to_int(r.alice_bit) << ',' << basis_char(r.alice_basis) << ','
        << (r.eve_symbol ? symbol_name(*r.eve_symbol) : std::string_view("-")) << ','
        << basis_char(r.bob_basis) << ',' << to_int(r.bob_bit) << ',' << (sifted[i] ? 1 : 0)
        << ',' << (disclosed[i] ? 1 : 0) << '\n';
  }
}

std::vector<TranscriptRow> read_transcript(std::istream& in) {
  std::vector<TranscriptRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 8) malformed(line_no, "expected 8 fields");

    TranscriptRow row;
    try {
      row.index = std::stoull(fields[0]);
    } catch (const std::exception&) {
      malformed(line_no, "bad index '" + fields[0] + "'");
    }
    row.record.alice_bit = parse_bit(fields[1], line_no);
    row.record.alice_basis = parse_basis(fields[2], line_no);
    row.record.eve_symbol = parse_symbol(fields[3], line_no);
    row.record.bob_basis = parse_basis(fields[4], line_no);
    row.record.bob_bit = parse_bit(fields[5], line_no);
    row.sifted = parse_bit(fields[6], line_no) == Bit::one;
    row.disclosed = parse_bit(fields[7], line_no) == Bit::one;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bb84
