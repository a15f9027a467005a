#include <doctest.h>

#include "mwetk/consistency.hpp"
#include "test_support.hpp"

using namespace mwetk;
using mwetk::testing::corpus_of;
using mwetk::testing::make_sentence;
using mwetk::testing::with_mwes;

namespace {

Corpus give_try() {
  Sentence labeled = make_sentence("r1", "I would give it a try");
  labeled.add_mwe(MweInstance({3, 5, 6}, MweType::Verb));
  return corpus_of({labeled, make_sentence("r2", "Would recomend giving|give this a try"),
                    make_sentence("r3", "The staff were|be friendly")});
}

}  // namespace

TEST_CASE("mining") {
  auto labeled = mine_labeled_set(give_try());
  CHECK(labeled.size() == 1);
  CHECK(labeled.contains("give_a_try"));
  CHECK(labeled.exemplars.at("give_a_try") == Exemplar{"r1", {3, 5, 6}});
  CHECK(mine_labeled_set(Corpus{}).empty());

  Corpus dup = give_try();
  dup.sentences[1].add_mwe(MweInstance({3, 5, 6}));
  CHECK(mine_labeled_set(dup).size() == 1);
}

TEST_CASE("candidates") {
  Corpus c = give_try();
  auto cands = find_candidates(c, mine_labeled_set(c));
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].sentence_id == "r2");
  CHECK(cands[0].token_indices == std::vector<int>{3, 5, 6});
  CHECK(cands[0].matched_entry == "give_a_try");
  CHECK(cands[0].id() == "r2:3,5,6");
  CHECK(cands[0].fingerprint == sentence_fingerprint(c.sentences[1]));
  CHECK(cands[0].status == CandidateStatus::Pending);
  CHECK(find_candidates(c, LabeledSet{}).empty());

  // Rearranged occurrences surface too.
  Corpus r = corpus_of({with_mwes(make_sentence("a", "break|break heart"), {{1, 2}}),
                        make_sentence("b", "heart broke|break")});
  CHECK(find_candidates(r, mine_labeled_set(r)).size() == 1);
}

TEST_CASE("decisions") {
  Corpus c = give_try();
  auto cands = find_candidates(c, mine_labeled_set(c));
  REQUIRE(cands.size() == 1);

  CHECK(apply_decisions(c, {{cands[0], CandidateStatus::Rejected}}) == c);

  Corpus accepted = apply_decisions(c, {{cands[0], CandidateStatus::Accepted}});
  CHECK(accepted.mwe_count() == c.mwe_count() + 1);
  CHECK(accepted.find("r2")->mwes.at(0).source() == "consistency-added");
  CHECK(apply_decisions(accepted, {{cands[0], CandidateStatus::Accepted}}) == accepted);
  CHECK(find_candidates(accepted, mine_labeled_set(accepted)).empty());

  Corpus edited = c;
  edited.sentences[1].tokens[1].surface = "recommend";
  CHECK_THROWS_AS(apply_decisions(edited, {{cands[0], CandidateStatus::Accepted}}), StaleCandidate);
  ConsistencyCandidate ghost = cands[0];
  ghost.sentence_id = "nope";
  CHECK_THROWS_AS(apply_decisions(c, {{ghost, CandidateStatus::Accepted}}), StaleCandidate);
}
