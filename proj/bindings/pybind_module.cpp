#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prs/errors.hpp"
#include "prs/harness.hpp"

namespace py = pybind11;
using namespace prs;

PYBIND11_MODULE(prs, m) {
  m.doc() = "pragmatic rational speaker simulator";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<UnknownTokenError>(m, "UnknownTokenError");

  m.attr("NUM_OBJECTS") = kNumObjects;
  m.attr("NUM_HYPERNYMS") = kNumHypernyms;
  m.attr("VOCAB_SIZE") = kVocabSize;
  m.attr("UNK") = kUnkToken;
  m.attr("BEAM_SIZE") = kBeamSize;
  m.attr("SIM_TIE") = kSimTie;

  py::class_<Rng>(m, "Rng")
      .def(py::init<uint64_t>(), py::arg("seed"))
      .def("seed", &Rng::seed)
      .def("u64", &Rng::u64)
      .def("below", &Rng::below, py::arg("bound"))
      .def("uniform01", &Rng::uniform01)
      .def("coin", &Rng::coin)
      .def("bernoulli", &Rng::bernoulli, py::arg("p"))
      .def("derive", &Rng::derive, py::arg("stream"));
  m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("stream"));

  py::class_<Taxonomy>(m, "Taxonomy")
      .def(py::init<>())
      .def("is_object", &Taxonomy::is_object)
      .def("is_hypernym", &Taxonomy::is_hypernym)
      .def("category_of", &Taxonomy::category_of)
      .def("hypernym_token", &Taxonomy::hypernym_token)
      .def("name", &Taxonomy::name)
      .def("find", &Taxonomy::find)
      .def("members", &Taxonomy::members)
      .def("category_size", &Taxonomy::category_size)
      .def("hypernym_of", &Taxonomy::hypernym_of)
      .def("in_category", &Taxonomy::in_category)
      .def("mapping", &Taxonomy::mapping)
      .def("inverse", &Taxonomy::inverse)
      .def("to_tsv", &Taxonomy::to_tsv);
  m.def("load_taxonomy", &load_taxonomy, py::return_value_policy::reference);
  m.def("load_taxonomy_file", &load_taxonomy_file, py::arg("path"));

  py::enum_<Difficulty>(m, "Difficulty")
      .value("Hard", Difficulty::Hard)
      .value("Easy", Difficulty::Easy);
  py::enum_<Mode>(m, "Mode")
      .value("Word", Mode::Word)
      .value("Sentence", Mode::Sentence);

  py::class_<Scene>(m, "Scene")
      .def(py::init<>())
      .def_readwrite("id", &Scene::id)
      .def_readwrite("objects", &Scene::objects)
      .def("contains", &Scene::contains)
      .def("__eq__", [](const Scene& a, const Scene& b) { return a == b; });

  py::class_<ScenePair>(m, "ScenePair")
      .def(py::init<>())
      .def_readwrite("id", &ScenePair::id)
      .def_readwrite("a", &ScenePair::a)
      .def_readwrite("b", &ScenePair::b)
      .def_readwrite("target", &ScenePair::target)
      .def_readwrite("difficulty", &ScenePair::difficulty)
      .def("target_scene", &ScenePair::target_scene)
      .def("distractor_scene", &ScenePair::distractor_scene);

  py::class_<GenConfig>(m, "GenConfig")
      .def(py::init<>())
      .def_readwrite("size_min", &GenConfig::size_min)
      .def_readwrite("size_max", &GenConfig::size_max);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("train", &Dataset::train)
      .def_readwrite("val", &Dataset::val)
      .def_readwrite("test", &Dataset::test)
      .def_readonly("seed", &Dataset::seed)
      .def_readonly("n_pairs", &Dataset::n_pairs)
      .def_readonly("hard_fraction", &Dataset::hard_fraction);

  m.def("symmetric_difference_size", &symmetric_difference_size);
  m.def("generate_scene", &generate_scene);
  m.def("generate_pair", &generate_pair);
  m.def("classify_difficulty", &classify_difficulty);
  m.def("assemble_dataset", &assemble_dataset, py::arg("seed"),
        py::arg("n_pairs"), py::arg("hard_fraction"),
        py::arg("config") = GenConfig{},
        py::arg("taxonomy") = load_taxonomy());
  m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("path"));
  m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("taxonomy"));
  m.def("difficulty_name", &difficulty_name);

  py::class_<Utterance>(m, "Utterance")
      .def(py::init<>())
      .def_readwrite("tokens", &Utterance::tokens)
      .def_readwrite("mode", &Utterance::mode)
      .def_readwrite("surface", &Utterance::surface);

  py::class_<CandidateSet>(m, "CandidateSet")
      .def(py::init<>())
      .def_readwrite("candidates", &CandidateSet::candidates)
      .def_readwrite("source_scene_id", &CandidateSet::source_scene_id);

  m.def("word_candidates", &word_candidates);
  m.def("sentence_candidates", &sentence_candidates);
  m.def("generality", &generality);

  py::enum_<ListenerKind>(m, "ListenerKind")
      .value("Full", ListenerKind::Full)
      .value("HypernymOnly", ListenerKind::HypernymOnly)
      .value("LimitedVisual", ListenerKind::LimitedVisual);

  py::class_<ListenerProfile>(m, "ListenerProfile")
      .def(py::init<>())
      .def_readwrite("kind", &ListenerProfile::kind)
      .def_readwrite("blocked_categories", &ListenerProfile::blocked_categories)
      .def_static("full", &ListenerProfile::full)
      .def_static("hypernym_only", &ListenerProfile::hypernym_only)
      .def_static("limited_visual", &ListenerProfile::limited_visual)
      .def_static("limited_visual_default",
                  &ListenerProfile::limited_visual_default)
      .def("blocks", &ListenerProfile::blocks);

  py::class_<Choice>(m, "Choice")
      .def_readonly("picked", &Choice::picked)
      .def_readonly("tie", &Choice::tie);

  m.def("perceive", &perceive);
  m.def("interpret_token",
        py::overload_cast<const std::string&, const ListenerProfile&,
                          const Taxonomy&>(&interpret_token));
  m.def("interpret_token_id",
        py::overload_cast<TokenId, const ListenerProfile&, const Taxonomy&>(
            &interpret_token));
  m.def("ground", &ground);
  m.def("choose", &choose);
  m.def("reward", &reward);

  py::class_<SimulationResult>(m, "SimulationResult")
      .def_readonly("t_i", &SimulationResult::t_i)
      .def_readonly("p_i", &SimulationResult::p_i);

  py::class_<ScheduleState>(m, "ScheduleState")
      .def_readwrite("best_val_accuracy", &ScheduleState::best_val_accuracy)
      .def_readwrite("epochs_since_improve",
                     &ScheduleState::epochs_since_improve)
      .def_readwrite("decay_factor", &ScheduleState::decay_factor)
      .def_readwrite("patience", &ScheduleState::patience);

  py::class_<DisparityPolicy>(m, "DisparityPolicy")
      .def_static("init", &DisparityPolicy::init, py::arg("mode"),
                  py::arg("lambda_l"), py::arg("lambda_d"), py::arg("lr"),
                  py::arg("patience"), py::arg("decay"), py::arg("seed"))
      .def_readwrite("mode", &DisparityPolicy::mode)
      .def_readwrite("theta", &DisparityPolicy::theta)
      .def_readwrite("lambda_l", &DisparityPolicy::lambda_l)
      .def_readwrite("lambda_d", &DisparityPolicy::lambda_d)
      .def_readwrite("lr", &DisparityPolicy::lr)
      .def_readwrite("schedule", &DisparityPolicy::schedule)
      .def_readwrite("seed", &DisparityPolicy::seed);

  py::enum_<SelectMode>(m, "SelectMode")
      .value("Train", SelectMode::Train)
      .value("Eval", SelectMode::Eval);

  py::class_<ScoredCandidate>(m, "ScoredCandidate")
      .def_readonly("index", &ScoredCandidate::index)
      .def_readonly("t_i", &ScoredCandidate::t_i)
      .def_readonly("p_i", &ScoredCandidate::p_i)
      .def_readonly("q_i", &ScoredCandidate::q_i)
      .def_readonly("a_i", &ScoredCandidate::a_i);

  m.def("simulate_listener", &simulate_listener);
  m.def("rational_select", &rational_select);
  m.def("q_score", &q_score);
  m.def("combined_score", &combined_score, py::arg("t_i"), py::arg("target"),
        py::arg("p_i"), py::arg("q_i"), py::arg("lambda_l"),
        py::arg("lambda_d"));
  m.def("pragmatic_select", &pragmatic_select);
  m.def("reinforce_update", &reinforce_update, py::arg("policy"),
        py::arg("chosen"), py::arg("chosen_score"), py::arg("r"),
        py::arg("lr"));

  py::class_<EpochStats>(m, "EpochStats")
      .def_readonly("train_accuracy", &EpochStats::train_accuracy)
      .def_readonly("val_accuracy", &EpochStats::val_accuracy)
      .def_readonly("mean_loss", &EpochStats::mean_loss)
      .def_readonly("lr", &EpochStats::lr)
      .def_readonly("skipped_updates", &EpochStats::skipped_updates);

  py::class_<TrainingHistory>(m, "TrainingHistory")
      .def_readonly("epochs", &TrainingHistory::epochs);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("mode", &TrainConfig::mode)
      .def_readwrite("lambda_l", &TrainConfig::lambda_l)
      .def_readwrite("lambda_d", &TrainConfig::lambda_d)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch", &TrainConfig::batch)
      .def_readwrite("lr0", &TrainConfig::lr0)
      .def_readwrite("patience", &TrainConfig::patience)
      .def_readwrite("decay", &TrainConfig::decay)
      .def_readwrite("seed", &TrainConfig::seed);

  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("policy", &TrainResult::policy)
      .def_readonly("history", &TrainResult::history);

  m.def("train", &train, py::arg("dataset"), py::arg("listener"),
        py::arg("config"), py::arg("taxonomy"));

  m.def("policy_to_json", &policy_to_json);
  m.def("history_to_json", &history_to_json);
  m.def("save_policy", &save_policy);
  m.def("load_policy", &load_policy);

  py::enum_<SpeakerKind>(m, "SpeakerKind")
      .value("S0", SpeakerKind::S0)
      .value("S1", SpeakerKind::S1)
      .value("S1d", SpeakerKind::S1d)
      .value("S1nd", SpeakerKind::S1nd);

  py::enum_<DisparityKind>(m, "DisparityKind")
      .value("Hypernym", DisparityKind::Hypernym)
      .value("LimitedVisual", DisparityKind::LimitedVisual);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("n_pairs", &ExperimentConfig::n_pairs)
      .def_readwrite("hard_fraction", &ExperimentConfig::hard_fraction)
      .def_readwrite("mode", &ExperimentConfig::mode)
      .def_readwrite("disparity", &ExperimentConfig::disparity)
      .def_readwrite("lambda_l", &ExperimentConfig::lambda_l)
      .def_readwrite("lambda_d", &ExperimentConfig::lambda_d)
      .def_readwrite("epochs", &ExperimentConfig::epochs)
      .def_readwrite("batch", &ExperimentConfig::batch)
      .def_readwrite("lr", &ExperimentConfig::lr)
      .def_readwrite("lr_scale", &ExperimentConfig::lr_scale)
      .def_readwrite("patience", &ExperimentConfig::patience)
      .def_readwrite("decay", &ExperimentConfig::decay)
      .def_readwrite("repeats", &ExperimentConfig::repeats)
      .def_readwrite("gen", &ExperimentConfig::gen);

  py::class_<Stat>(m, "Stat")
      .def_readonly("mean", &Stat::mean)
      .def_readonly("stdev", &Stat::stdev);

  py::class_<AccuracyReport>(m, "AccuracyReport")
      .def_readonly("acc", &AccuracyReport::acc)
      .def_readonly("raw", &AccuracyReport::raw);

  py::class_<ShiftReport>(m, "ShiftReport")
      .def_readonly("freq_mean", &ShiftReport::freq_mean)
      .def_readonly("freq_std", &ShiftReport::freq_std)
      .def_readonly("hyponym_share", &ShiftReport::hyponym_share)
      .def_readonly("hypernym_share", &ShiftReport::hypernym_share)
      .def_readonly("animal_token_share", &ShiftReport::animal_token_share);

  py::class_<GainRow>(m, "GainRow")
      .def_readonly("slice", &GainRow::slice)
      .def_readonly("s1d_minus_s1", &GainRow::s1d_minus_s1)
      .def_readonly("s1d_minus_s1nd", &GainRow::s1d_minus_s1nd);

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("lambda_l", &SweepPoint::lambda_l)
      .def_readonly("lambda_d", &SweepPoint::lambda_d)
      .def_readonly("combined_acc", &SweepPoint::combined_acc);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("accuracy", &ExperimentResult::accuracy)
      .def_readonly("shift", &ExperimentResult::shift)
      .def_readonly("policies", &ExperimentResult::policies)
      .def_readonly("histories", &ExperimentResult::histories);

  m.def("resolve_defaults", &resolve_defaults);
  m.def("profile_for", &profile_for);
  m.def("evaluate_speaker", &evaluate_speaker);
  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::arg("out_dir") = "");
  m.def("gain_report", &gain_report);
  m.def("default_lambda_grid", &default_lambda_grid);
  m.def("lambda_sweep", &lambda_sweep, py::arg("config"), py::arg("grid"),
        py::arg("out_dir") = "");
  m.def("speaker_name", &speaker_name);
  m.def("slice_name", &slice_name);
  m.def("disparity_name", &disparity_name);
  m.def("format_number", &format_number);
  m.def("accuracy_to_csv", &accuracy_to_csv);
  m.def("shift_to_csv", &shift_to_csv);
  m.def("sweep_to_csv", &sweep_to_csv);
  m.def("gains_to_text", &gains_to_text);
}
