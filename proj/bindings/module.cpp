// Python bindings for the streambench engine: domain types, metrics,
// simulator, and the numeric kernels, with numpy interop for tensors.

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <limits>

#include "streambench/coco_io.hpp"
#include "streambench/detectors.hpp"
#include "streambench/distill.hpp"
#include "streambench/geometry.hpp"
#include "streambench/kernels.hpp"
#include "streambench/pyramid.hpp"
#include "streambench/report.hpp"
#include "streambench/scenario.hpp"
#include "streambench/selfcheck.hpp"
#include "streambench/simulator.hpp"
#include "streambench/streaming.hpp"
#include "streambench/tensor.hpp"

namespace py = pybind11;
using namespace streambench;

namespace {

Tensor4 tensor_from_array(
    py::array_t<double, py::array::c_style | py::array::forcecast> array) {
  if (array.ndim() != 4) {
    throw ShapeError("Tensor4 expects a 4-d (n, c, h, w) array");
  }
  Tensor4 tensor(static_cast<int>(array.shape(0)),
                 static_cast<int>(array.shape(1)),
                 static_cast<int>(array.shape(2)),
                 static_cast<int>(array.shape(3)));
  std::memcpy(tensor.data().data(), array.data(),
              tensor.size() * sizeof(double));
  return tensor;
}

py::buffer_info tensor_buffer(Tensor4& tensor) {
  const auto dims = tensor.dims();
  return py::buffer_info(
      tensor.data().data(), sizeof(double),
      py::format_descriptor<double>::format(), 4,
      {static_cast<py::ssize_t>(dims[0]), static_cast<py::ssize_t>(dims[1]),
       static_cast<py::ssize_t>(dims[2]), static_cast<py::ssize_t>(dims[3])},
      {static_cast<py::ssize_t>(sizeof(double)) * dims[1] * dims[2] * dims[3],
       static_cast<py::ssize_t>(sizeof(double)) * dims[2] * dims[3],
       static_cast<py::ssize_t>(sizeof(double)) * dims[3],
       static_cast<py::ssize_t>(sizeof(double))});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "latency-aware streaming perception benchmark engine";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError",
                                         PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<DegenerateGeometryError>(m, "DegenerateGeometryError",
                                                  PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);

  // ------------------------------------------------------------ stream model
  py::class_<BoundingBox>(m, "BoundingBox")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("x_min"),
           py::arg("y_min"), py::arg("x_max"), py::arg("y_max"))
      .def_static("from_xywh", &BoundingBox::from_xywh)
      .def_readwrite("x_min", &BoundingBox::x_min)
      .def_readwrite("y_min", &BoundingBox::y_min)
      .def_readwrite("x_max", &BoundingBox::x_max)
      .def_readwrite("y_max", &BoundingBox::y_max)
      .def("width", &BoundingBox::width)
      .def("height", &BoundingBox::height)
      .def("area", &BoundingBox::area)
      .def("center_x", &BoundingBox::center_x)
      .def("center_y", &BoundingBox::center_y)
      .def(py::self == py::self)
      .def("__repr__", [](const BoundingBox& b) {
        return "BoundingBox(" + std::to_string(b.x_min) + ", " +
               std::to_string(b.y_min) + ", " + std::to_string(b.x_max) +
               ", " + std::to_string(b.y_max) + ")";
      });

  py::class_<Detection>(m, "Detection")
      .def(py::init<>())
      .def(py::init([](const BoundingBox& bbox, int category, double score) {
             return Detection{bbox, category, score};
           }),
           py::arg("bbox"), py::arg("category"), py::arg("score"))
      .def_readwrite("bbox", &Detection::bbox)
      .def_readwrite("category", &Detection::category)
      .def_readwrite("score", &Detection::score);

  py::class_<TruthObject>(m, "TruthObject")
      .def(py::init<>())
      .def(py::init([](const BoundingBox& bbox, int category, double area,
                       bool ignore) {
             return TruthObject{bbox, category,
                                area > 0.0 ? area : bbox.area(), ignore};
           }),
           py::arg("bbox"), py::arg("category"), py::arg("area") = 0.0,
           py::arg("ignore") = false)
      .def_readwrite("bbox", &TruthObject::bbox)
      .def_readwrite("category", &TruthObject::category)
      .def_readwrite("area", &TruthObject::area)
      .def_readwrite("ignore", &TruthObject::ignore);

  py::class_<FrameTruth>(m, "FrameTruth")
      .def(py::init<>())
      .def_readwrite("frame_index", &FrameTruth::frame_index)
      .def_readwrite("timestamp", &FrameTruth::timestamp)
      .def_readwrite("objects", &FrameTruth::objects);

  py::class_<CategoryInfo>(m, "CategoryInfo")
      .def(py::init<>())
      .def(py::init([](int id, const std::string& name) {
             return CategoryInfo{id, name};
           }),
           py::arg("id"), py::arg("name") = "")
      .def_readwrite("id", &CategoryInfo::id)
      .def_readwrite("name", &CategoryInfo::name);

  py::class_<StreamScenario>(m, "StreamScenario")
      .def(py::init<>())
      .def_readwrite("frame_period", &StreamScenario::frame_period)
      .def_readwrite("frames", &StreamScenario::frames)
      .def_readwrite("categories", &StreamScenario::categories)
      .def_readwrite("sequence_id", &StreamScenario::sequence_id)
      .def("frame_count", &StreamScenario::frame_count)
      .def("validate", &StreamScenario::validate);

  py::class_<WindowSpec>(m, "WindowSpec")
      .def(py::init<>())
      .def(py::init([](int n_support, int step) {
             return WindowSpec{n_support, step};
           }),
           py::arg("n_support"), py::arg("step") = 1)
      .def_readwrite("n_support", &WindowSpec::n_support)
      .def_readwrite("step", &WindowSpec::step);

  m.def("make_window", &make_window, py::arg("scenario"), py::arg("t"),
        py::arg("spec"));

  py::class_<EmittedResult>(m, "EmittedResult")
      .def(py::init<>())
      .def_readwrite("source_frame", &EmittedResult::source_frame)
      .def_readwrite("horizon", &EmittedResult::horizon)
      .def_readwrite("detections", &EmittedResult::detections)
      .def_readwrite("emit_time", &EmittedResult::emit_time);

  py::class_<ResultTimeline>(m, "ResultTimeline")
      .def(py::init<>())
      .def_readwrite("sequence_id", &ResultTimeline::sequence_id)
      .def_readwrite("results", &ResultTimeline::results)
      .def("sort", &ResultTimeline::sort)
      .def("validate", &ResultTimeline::validate);

  // --------------------------------------------------------------- geometry
  py::class_<GradGIoU>(m, "GradGIoU")
      .def_readonly("d_x_min", &GradGIoU::d_x_min)
      .def_readonly("d_y_min", &GradGIoU::d_y_min)
      .def_readonly("d_x_max", &GradGIoU::d_x_max)
      .def_readonly("d_y_max", &GradGIoU::d_y_max);

  m.def("iou", &iou, py::arg("a"), py::arg("b"));
  m.def("giou", &giou, py::arg("a"), py::arg("b"));
  m.def("giou_loss", &giou_loss, py::arg("pred"), py::arg("target"));
  m.def("giou_loss_grad", &giou_loss_grad, py::arg("pred"), py::arg("target"));

  // --------------------------------------------------------------- matching
  py::class_<MatchRecord>(m, "MatchRecord")
      .def_readonly("detection_index", &MatchRecord::detection_index)
      .def_readonly("truth_index", &MatchRecord::truth_index)
      .def_readonly("iou", &MatchRecord::iou)
      .def_readonly("is_true_positive", &MatchRecord::is_true_positive)
      .def_readonly("ignored", &MatchRecord::ignored)
      .def_readonly("score", &MatchRecord::score);

  py::class_<FramePair>(m, "FramePair")
      .def(py::init<>())
      .def_readwrite("detections", &FramePair::detections)
      .def_readwrite("truths", &FramePair::truths);

  py::class_<EvalOptions>(m, "EvalOptions")
      .def(py::init(&EvalOptions::defaults))
      .def_readwrite("iou_thresholds", &EvalOptions::iou_thresholds)
      .def_readwrite("small_area_max", &EvalOptions::small_area_max)
      .def_readwrite("medium_area_max", &EvalOptions::medium_area_max)
      .def_readwrite("detections_cap", &EvalOptions::detections_cap);

  py::class_<APReport>(m, "APReport")
      .def_readonly("ap", &APReport::ap)
      .def_readonly("ap50", &APReport::ap50)
      .def_readonly("ap75", &APReport::ap75)
      .def_readonly("ap_small", &APReport::ap_small)
      .def_readonly("ap_medium", &APReport::ap_medium)
      .def_readonly("ap_large", &APReport::ap_large)
      .def_readonly("per_category", &APReport::per_category)
      .def_readonly("true_positives", &APReport::true_positives)
      .def_readonly("false_positives", &APReport::false_positives)
      .def_readonly("false_negatives", &APReport::false_negatives);

  m.def("match_frame", &match_frame, py::arg("detections"), py::arg("truths"),
        py::arg("iou_threshold"), py::arg("category"));
  m.def("average_precision", &average_precision, py::arg("records"),
        py::arg("n_truths"));
  m.def("evaluate", &evaluate, py::arg("frames"), py::arg("categories"),
        py::arg("options") = EvalOptions::defaults());

  // -------------------------------------------------------------- streaming
  py::enum_<StreamMode>(m, "StreamMode")
      .value("REAL_TIME", StreamMode::kRealTime)
      .value("NON_REAL_TIME", StreamMode::kNonRealTime);

  py::class_<StreamPolicy>(m, "StreamPolicy")
      .def(py::init<>())
      .def(py::init([](StreamMode mode, int horizon, int warmup_frames) {
             return StreamPolicy{mode, horizon, warmup_frames};
           }),
           py::arg("mode") = StreamMode::kRealTime, py::arg("horizon") = 1,
           py::arg("warmup_frames") = 0)
      .def_readwrite("mode", &StreamPolicy::mode)
      .def_readwrite("horizon", &StreamPolicy::horizon)
      .def_readwrite("warmup_frames", &StreamPolicy::warmup_frames);

  py::class_<KStepReport>(m, "KStepReport")
      .def_readonly("max_k", &KStepReport::max_k)
      .def_readonly("aggregate", &KStepReport::aggregate)
      .def_readonly("per_sequence", &KStepReport::per_sequence);

  m.def("associate", &associate, py::arg("timeline"), py::arg("scenario"),
        py::arg("k"), py::arg("policy"));
  m.def("streaming_ap", &streaming_ap, py::arg("timeline"),
        py::arg("scenario"), py::arg("policy"),
        py::arg("options") = EvalOptions::defaults());

  // -------------------------------------------------------------- simulator
  py::enum_<LatencyKind>(m, "LatencyKind")
      .value("CONSTANT", LatencyKind::kConstant)
      .value("GAUSSIAN_CLAMPED", LatencyKind::kGaussianClamped)
      .value("TRACE", LatencyKind::kTrace);

  py::class_<LatencyModel>(m, "LatencyModel")
      .def(py::init<>())
      .def_readwrite("kind", &LatencyModel::kind)
      .def_readwrite("mean", &LatencyModel::mean)
      .def_readwrite("std_dev", &LatencyModel::std_dev)
      .def_readwrite("floor", &LatencyModel::floor)
      .def_readwrite("trace", &LatencyModel::trace)
      .def_readwrite("seed_salt", &LatencyModel::seed_salt);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("policy", &SimConfig::policy)
      .def_readwrite("window", &SimConfig::window)
      .def_readwrite("latency", &SimConfig::latency)
      .def_readwrite("seed", &SimConfig::seed);

  py::class_<SimStats>(m, "SimStats")
      .def_readonly("processed_frames", &SimStats::processed_frames)
      .def_readonly("skipped_frames", &SimStats::skipped_frames)
      .def_readonly("deadline_misses", &SimStats::deadline_misses);

  py::class_<SimRun>(m, "SimRun")
      .def_readonly("timeline", &SimRun::timeline)
      .def_readonly("stats", &SimRun::stats);

  py::class_<DetectorModel>(m, "DetectorModel")
      .def("name", &DetectorModel::name);

  m.def("make_detector", &make_detector, py::arg("name"));
  m.def(
      "make_noisy_detector",
      [](const std::string& inner, double jitter_std, double score_std,
         double drop_rate,
         double spurious_rate) -> std::unique_ptr<DetectorModel> {
        NoisyWrapper::Params params;
        params.jitter_std = jitter_std;
        params.score_std = score_std;
        params.drop_rate = drop_rate;
        params.spurious_rate = spurious_rate;
        return std::make_unique<NoisyWrapper>(make_detector(inner), params);
      },
      py::arg("inner"), py::arg("jitter_std") = 0.0,
      py::arg("score_std") = 0.0, py::arg("drop_rate") = 0.0,
      py::arg("spurious_rate") = 0.0);

  m.def("simulate", &run, py::arg("scenario"), py::arg("detector"),
        py::arg("config"));
  py::class_<SweepCell>(m, "SweepCell")
      .def_readonly("window", &SweepCell::window)
      .def_readonly("report", &SweepCell::report);
  m.def("sweep_window", &sweep_window, py::arg("scenario"),
        py::arg("detector"), py::arg("config"), py::arg("grid"),
        py::arg("options") = EvalOptions::defaults());

  // ---------------------------------------------------------------- kernels
  py::class_<Tensor4>(m, "Tensor4", py::buffer_protocol())
      .def(py::init<>())
      .def(py::init<int, int, int, int, double>(), py::arg("n"), py::arg("c"),
           py::arg("h"), py::arg("w"), py::arg("fill") = 0.0)
      .def(py::init(&tensor_from_array), py::arg("array"))
      .def_buffer(&tensor_buffer)
      .def("n", &Tensor4::n)
      .def("c", &Tensor4::c)
      .def("h", &Tensor4::h)
      .def("w", &Tensor4::w)
      .def("at",
           [](const Tensor4& t, int n, int c, int y, int x) {
             return t.at(n, c, y, x);
           })
      .def(py::self == py::self);

  m.def("save_tensor", &save_tensor, py::arg("tensor"), py::arg("path"));
  m.def("load_tensor", &load_tensor, py::arg("path"));

  py::class_<ConvParams>(m, "ConvParams")
      .def(py::init(&ConvParams::make), py::arg("c_out"), py::arg("c_in"),
           py::arg("k"), py::arg("stride") = 1, py::arg("padding") = -1)
      .def_readwrite("weight", &ConvParams::weight)
      .def_readwrite("bias", &ConvParams::bias)
      .def_readwrite("stride", &ConvParams::stride)
      .def_readwrite("padding", &ConvParams::padding);

  py::class_<BatchNorm>(m, "BatchNorm")
      .def(py::init<>())
      .def_static("identity", &BatchNorm::identity, py::arg("channels"))
      .def_readwrite("mean", &BatchNorm::mean)
      .def_readwrite("var", &BatchNorm::var)
      .def_readwrite("gamma", &BatchNorm::gamma)
      .def_readwrite("beta", &BatchNorm::beta)
      .def_readwrite("eps", &BatchNorm::eps);

  py::class_<RepBranches>(m, "RepBranches")
      .def(py::init<>())
      .def_readwrite("main", &RepBranches::main)
      .def_readwrite("side", &RepBranches::side)
      .def_readwrite("identity_enabled", &RepBranches::identity_enabled)
      .def_readwrite("main_bn", &RepBranches::main_bn)
      .def_readwrite("side_bn", &RepBranches::side_bn)
      .def_readwrite("identity_bn", &RepBranches::identity_bn);

  m.def("conv2d", &conv2d, py::arg("x"), py::arg("params"));
  m.def("bilinear_sample", &bilinear_sample, py::arg("x"), py::arg("n"),
        py::arg("c"), py::arg("y"), py::arg("x_pos"));
  m.def("deform_conv2d", &deform_conv2d, py::arg("x"), py::arg("params"),
        py::arg("offsets"));
  m.def("rep_fuse", &rep_fuse, py::arg("branches"));
  m.def("rep_branches_forward", &rep_branches_forward, py::arg("x"),
        py::arg("branches"));
  m.def("long_short_fuse", &long_short_fuse, py::arg("short_path"),
        py::arg("long_path"), py::arg("reduce"));

  // ---------------------------------------------------------------- pyramid
  py::enum_<EdgeKind>(m, "EdgeKind")
      .value("LATERAL", EdgeKind::kLateral)
      .value("TOP_DOWN", EdgeKind::kTopDown)
      .value("BOTTOM_UP", EdgeKind::kBottomUp)
      .value("AUXILIARY", EdgeKind::kAuxiliary);

  py::class_<PyramidNode>(m, "PyramidNode")
      .def(py::init([](const std::string& name, int stride, int channels) {
             return PyramidNode{name, stride, channels};
           }),
           py::arg("name"), py::arg("stride"), py::arg("channels"))
      .def_readwrite("name", &PyramidNode::name)
      .def_readwrite("stride", &PyramidNode::stride)
      .def_readwrite("channels", &PyramidNode::channels);

  py::class_<PyramidEdge>(m, "PyramidEdge")
      .def(py::init([](const std::string& from, const std::string& to,
                       EdgeKind kind) {
             return PyramidEdge{from, to, kind};
           }),
           py::arg("from_node"), py::arg("to_node"), py::arg("kind"))
      .def_readwrite("from_node", &PyramidEdge::from)
      .def_readwrite("to_node", &PyramidEdge::to)
      .def_readwrite("kind", &PyramidEdge::kind);

  py::class_<PyramidSpec>(m, "PyramidSpec")
      .def(py::init<>())
      .def_static("pafpn", &PyramidSpec::pafpn, py::arg("input_height"),
                  py::arg("input_width"),
                  py::arg("strides") = std::vector<int>{8, 16, 32},
                  py::arg("channels") = std::vector<int>{256, 512, 1024})
      .def_static("drfpn", &PyramidSpec::drfpn, py::arg("input_height"),
                  py::arg("input_width"),
                  py::arg("strides") = std::vector<int>{8, 16, 32},
                  py::arg("channels") = std::vector<int>{256, 512, 1024})
      .def_readwrite("input_height", &PyramidSpec::input_height)
      .def_readwrite("input_width", &PyramidSpec::input_width)
      .def_readwrite("nodes", &PyramidSpec::nodes)
      .def_readwrite("edges", &PyramidSpec::edges);

  py::class_<NodeShape>(m, "NodeShape")
      .def_readonly("channels", &NodeShape::channels)
      .def_readonly("height", &NodeShape::height)
      .def_readonly("width", &NodeShape::width)
      .def("__repr__", [](const NodeShape& s) {
        return "NodeShape(channels=" + std::to_string(s.channels) +
               ", height=" + std::to_string(s.height) +
               ", width=" + std::to_string(s.width) + ")";
      });

  m.def("drfpn_shapes", &drfpn_shapes, py::arg("spec"));

  // ----------------------------------------------------------- distillation
  py::class_<LogitsLevel>(m, "LogitsLevel")
      .def(py::init<>())
      .def_readwrite("stride", &LogitsLevel::stride)
      .def_readwrite("cls", &LogitsLevel::cls)
      .def_readwrite("obj", &LogitsLevel::obj)
      .def_readwrite("reg", &LogitsLevel::reg);

  py::class_<LogitsBundle>(m, "LogitsBundle")
      .def(py::init<>())
      .def_readwrite("levels", &LogitsBundle::levels)
      .def("check", &LogitsBundle::check)
      .def("num_classes", &LogitsBundle::num_classes)
      .def("batch", &LogitsBundle::batch);

  py::class_<AssignTruth>(m, "AssignTruth")
      .def(py::init([](const BoundingBox& bbox, int category) {
             return AssignTruth{bbox, category};
           }),
           py::arg("bbox"), py::arg("category"))
      .def_readwrite("bbox", &AssignTruth::bbox)
      .def_readwrite("category", &AssignTruth::category);

  py::class_<OtaParams>(m, "OtaParams")
      .def(py::init<>())
      .def_readwrite("center_radius", &OtaParams::center_radius)
      .def_readwrite("cost_iou_weight", &OtaParams::cost_iou_weight)
      .def_readwrite("top_candidates", &OtaParams::top_candidates);

  py::class_<PositiveSet>(m, "PositiveSet")
      .def(py::init<>())
      .def_readwrite("assigned", &PositiveSet::assigned)
      .def("count", &PositiveSet::count)
      .def("empty", &PositiveSet::empty);

  py::class_<AkdmLoss>(m, "AkdmLoss")
      .def_readonly("total", &AkdmLoss::total)
      .def_readonly("cls", &AkdmLoss::cls)
      .def_readonly("obj", &AkdmLoss::obj)
      .def_readonly("reg", &AkdmLoss::reg)
      .def_readonly("empty_positives", &AkdmLoss::empty_positives);

  py::class_<GradCheckReport>(m, "GradCheckReport")
      .def_readonly("max_rel_mse", &GradCheckReport::max_rel_mse)
      .def_readonly("max_rel_reg", &GradCheckReport::max_rel_reg)
      .def("max_rel", &GradCheckReport::max_rel);

  py::enum_<ModelScale>(m, "ModelScale")
      .value("S", ModelScale::kSmall)
      .value("M", ModelScale::kMedium)
      .value("L", ModelScale::kLarge);

  m.def("decode_reg", &decode_reg, py::arg("reg"), py::arg("n"),
        py::arg("grid_y"), py::arg("grid_x"), py::arg("stride"));
  m.def("ota_assign", &ota_assign, py::arg("bundle"), py::arg("truths"),
        py::arg("params") = OtaParams{});
  m.def("akdm_loss", &akdm_loss, py::arg("student"), py::arg("teacher"),
        py::arg("positives"));
  m.def("akdm_grad_check", &akdm_grad_check, py::arg("student"),
        py::arg("teacher"), py::arg("positives"));
  m.def("parse_model_scale", &parse_model_scale, py::arg("tag"));
  m.def("weighted_total", &weighted_total, py::arg("task_loss"),
        py::arg("akdm"), py::arg("scale"));
  m.def("save_bundle", &save_bundle, py::arg("bundle"), py::arg("path"));
  m.def("load_bundle", &load_bundle, py::arg("path"));

  // --------------------------------------------------------------------- io
  py::class_<ObjectSpec>(m, "ObjectSpec")
      .def(py::init<>())
      .def_readwrite("category", &ObjectSpec::category)
      .def_readwrite("initial", &ObjectSpec::initial)
      .def_readwrite("vx", &ObjectSpec::vx)
      .def_readwrite("vy", &ObjectSpec::vy)
      .def_readwrite("ax", &ObjectSpec::ax)
      .def_readwrite("ay", &ObjectSpec::ay)
      .def_readwrite("spawn", &ObjectSpec::spawn)
      .def_readwrite("despawn", &ObjectSpec::despawn);

  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def(py::init<>())
      .def_readwrite("frame_count", &ScenarioSpec::frame_count)
      .def_readwrite("frame_period", &ScenarioSpec::frame_period)
      .def_readwrite("image_width", &ScenarioSpec::image_width)
      .def_readwrite("image_height", &ScenarioSpec::image_height)
      .def_readwrite("seed", &ScenarioSpec::seed)
      .def_readwrite("sequence_id", &ScenarioSpec::sequence_id)
      .def_readwrite("objects", &ScenarioSpec::objects)
      .def_readwrite("categories", &ScenarioSpec::categories);

  m.def(
      "generate_scenario",
      [](const ScenarioSpec& spec) { return generate_scenario(spec); },
      py::arg("spec"));

  py::class_<CocoLoadOptions>(m, "CocoLoadOptions")
      .def(py::init<>())
      .def_readwrite("sequence_key", &CocoLoadOptions::sequence_key)
      .def_readwrite("frame_key", &CocoLoadOptions::frame_key)
      .def_readwrite("default_frame_period",
                     &CocoLoadOptions::default_frame_period);

  m.def("load_coco_stream", &load_coco_stream, py::arg("path"),
        py::arg("options") = CocoLoadOptions{});
  m.def("load_results", &load_results, py::arg("path"),
        py::arg("sort_tolerance") = std::numeric_limits<double>::infinity());
  m.def("save_timeline", &save_timeline, py::arg("timeline"), py::arg("path"));
  m.def("load_scenario_spec", &load_scenario_spec, py::arg("path"));
  m.def("write_report", &write_report, py::arg("report"), py::arg("format"),
        py::arg("path"));
  m.def("load_report_json", &load_report_json, py::arg("path"));

  // --------------------------------------------------------------- selfcheck
  py::class_<SelfCheckResult>(m, "SelfCheckResult")
      .def_readonly("property", &SelfCheckResult::property)
      .def_readonly("max_error", &SelfCheckResult::max_error)
      .def_readonly("tolerance", &SelfCheckResult::tolerance)
      .def_readonly("ok", &SelfCheckResult::pass)
      .def("__repr__", [](const SelfCheckResult& r) {
        return "SelfCheckResult(" + r.property +
               (r.pass ? ": pass)" : ": FAIL)");
      });
  m.def("run_selfcheck", &run_selfcheck, py::arg("seed") = 0,
        py::arg("tolerance_scale") = 1.0);

  m.attr("__version__") = "0.1.0";
}
