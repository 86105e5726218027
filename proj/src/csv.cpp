#include "fraudml/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

namespace fraudml::io {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

const std::string kTransactionCsvHeader =
    "tx_id,timestamp,card_id,terminal_id,amount,country,card_type,is_fraud";

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

template <typename T>
T parse_number(const std::string& field, const std::string& path, std::size_t line_no,
               const char* name) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    parse_fail(path, line_no, std::string("bad ") + name + ": '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<seq::Transaction> read_transactions_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTransactionCsvHeader) {
    throw std::runtime_error(path + ": unexpected header '" + line + "'");
  }

  std::vector<seq::Transaction> txns;
  std::unordered_set<std::uint64_t> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 8) parse_fail(path, line_no, "expected 8 fields");
    seq::Transaction tx;
    tx.tx_id = parse_number<std::uint64_t>(fields[0], path, line_no, "tx_id");
    tx.timestamp = parse_number<std::int64_t>(fields[1], path, line_no, "timestamp");
    tx.card_id = fields[2];
    tx.terminal_id = fields[3];
    tx.amount = parse_number<double>(fields[4], path, line_no, "amount");
    tx.country = fields[5];
    tx.card_type = fields[6];
    if (fields[7] == "0") {
      tx.is_fraud = false;
    } else if (fields[7] == "1") {
      tx.is_fraud = true;
    } else {
      parse_fail(path, line_no, "is_fraud must be 0 or 1");
    }
    if (tx.timestamp < 0) parse_fail(path, line_no, "negative timestamp");
    if (!(tx.amount >= 0.0)) parse_fail(path, line_no, "negative amount");
    if (!seen.insert(tx.tx_id).second) {
      parse_fail(path, line_no, "duplicate tx_id " + std::to_string(tx.tx_id));
    }
    txns.push_back(std::move(tx));
  }
  return txns;
}

void write_transactions_csv(std::ostream& out, const std::vector<seq::Transaction>& txns) {
  out << kTransactionCsvHeader << "\n";
  char buf[32];
  for (const seq::Transaction& tx : txns) {
    std::snprintf(buf, sizeof(buf), "%.2f", tx.amount);
    out << tx.tx_id << ',' << tx.timestamp << ',' << tx.card_id << ','
        << tx.terminal_id << ',' << buf << ',' << tx.country << ',' << tx.card_type
        << ',' << (tx.is_fraud ? 1 : 0) << "\n";
  }
}

void write_transactions_csv(const std::string& path,
                            const std::vector<seq::Transaction>& txns) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_transactions_csv(out, txns);
}

}  // namespace fraudml::io
