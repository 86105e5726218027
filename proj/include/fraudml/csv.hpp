#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fraudml/sequencer.hpp"

namespace fraudml::io {

// 17 significant digits: enough to reconstruct the exact double.
std::string format_double(double value);

// Splits a comma-separated line; the pipeline formats carry no quoting.
std::vector<std::string> split_csv_line(const std::string& line);

extern const std::string kTransactionCsvHeader;

// Reads `tx_id,timestamp,card_id,terminal_id,amount,country,card_type,is_fraud`.
// Validates the header, field arity, numeric fields, amount >= 0,
// timestamp >= 0 and tx_id uniqueness. Rows are returned in file order.
std::vector<seq::Transaction> read_transactions_csv(const std::string& path);

void write_transactions_csv(std::ostream& out,
                            const std::vector<seq::Transaction>& txns);
void write_transactions_csv(const std::string& path,
                            const std::vector<seq::Transaction>& txns);

}  // namespace fraudml::io
