// Walks through the reciprocity pairing on F_2((t)) and F_2((t))((u)):
// character tables of a few classes, their kernels against norms, and the
// graded pairing matrix at one level.
#include <iomanip>
#include <iostream>

#include "hilok/hilok.hpp"

using namespace hilok;

static void show_character(const Spec& K, const std::string& a) {
  CohClass chi = h1_class(parse_element(K, a));
  CharacterTable tab = phi_character(chi, 6);
  std::cout << "chi = " << reduce(chi).str() << " over " << K->str(false) << ", t-level " << t_level(chi) << "\n";
  for (const auto& e : tab.values)
    if (e.value) std::cout << "  " << std::left << std::setw(28) << e.label << " -> " << e.value << "\n";
  ExistenceReport rep = existence_check(chi, 6);
  std::cout << "  kernel index " << rep.index << ", norm symbols checked " << rep.norm_symbols << ", failures "
            << rep.norm_failures;
  if (rep.oracle_checked) std::cout << ", kernel equals norm group: " << (rep.oracle_equal ? "yes" : "no");
  std::cout << "\n\n";
}

int main() {
  Spec K1 = parse_spec("F(2)((t))");
  for (const char* a : {"1/t", "t^-3 + t^-1", "1"}) show_character(K1, a);

  Spec K2 = parse_spec("F(2)((t))((u))");
  for (const char* a : {"1/u", "1/t"}) show_character(K2, a);

  GradedMatrix g = graded_pairing_matrix(K2, 1, 1, 2);
  std::cout << "graded pairing at level 1 on " << K2->str(false) << " (rank " << g.rank << "):\n";
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    std::cout << "  " << std::left << std::setw(26) << g.rows[i];
    for (int v : g.direct[i]) std::cout << ' ' << v;
    std::cout << "\n";
  }
  std::cout << "columns:\n";
  for (const auto& c : g.cols) std::cout << "  " << c << "\n";
}
