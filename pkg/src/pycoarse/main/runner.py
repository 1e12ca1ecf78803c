# Runner facade for all commands
# contributors: smlee

# History
# 2026-10-17 | v1.0.1 - automatic roe margin, strict pipeline verdicts
# 2026-10-17 | v1.0 - first commit

# Module import
from pathlib import Path
from typing import Sequence, Union
import numpy as np
from pycoarse.conf import PipelineError
from pycoarse.conf.logger import log, Logger
log_config = Logger(name='pycoarse', verbose=1)
log_config.clear_log_content()
logger = log_config.get_logger()
from pycoarse.util.spaces import DiscreteMetricSpace, GroupBall, random_regular_graph
from pycoarse.util.kernels import (Kernel, check_positive_definite, check_negative_type, properness_profile,
                                   approximate_unit_from_proper, akemann_walter_synthesize)
from pycoarse.util.embeddings import (distance_row_kernel, embedding_from_negative_type, compression_bounds,
                                      expander_obstruction)
from pycoarse.util.roe import (FiniteRankMap, induced_kernel, verify_property_i,
                               verify_property_ii, verify_property_iii)
from pycoarse.util.groupoid import (alpha_star, check_groupoid_pd, check_groupoid_nt, safe_bases,
                                    haagerup_certificate)
from .func.get_config import DEFAULTS, get_config, schedule_from_config
from .func.report import RunReport
from .func import codec

CHECK_KINDS = ("pd", "nt", "groupoid-pd", "groupoid-nt")
ROE_COMMANDS = ("induced-kernel", "property-i", "property-ii", "property-iii")
SOURCES = ("auto", "metric", "rows")

# Main
class Runner:
    """Command runner

    Args:
        name: configuration section name
        path: YAML configuration path, if empty the environment and defaults are used
        out: artifact directory, nothing is written when None
        echo: mirror log records to stderr
        overrides: configuration values taking precedence (None values are ignored)
    """

    def __init__(self,
                 name:str="pycoarse",
                 *,
                 path:str=str(),
                 out:Union[str, Path]=None,
                 echo:bool=False,
                 **overrides):
        self.name = name
        self.config = get_config(name, path=path)
        for key, value in overrides.items():
            if key not in DEFAULTS:
                raise KeyError(f"Unknown configuration key: {key}")
            if value is not None:
                self.config[key] = value
        self.out = out
        self.log_config = Logger(name='pycoarse', verbose=self.config["verbose"], echo=echo)
        self.log_config.clear_log_content()

    def __repr__(self) -> str:
        return f"Runner({self.name}, out={self.out})"

    def run(self, command:str, **kwargs) -> RunReport:
        """Dispatch a command by name: check, pipeline, roe or expander"""
        if command == "check":
            return self.cmd_check(**kwargs)
        elif command == "pipeline":
            return self.cmd_pipeline(**kwargs)
        elif command == "roe":
            return self.cmd_roe(**kwargs)
        elif command == "expander":
            return self.cmd_expander(**kwargs)
        raise ValueError(f"Unknown command: {command}")

    def _report(self, command:str, params:dict) -> RunReport:
        params = {**params, "tol":self.config["tol"]}
        return RunReport(command, params, seed=self.config["seed"], out=self.out)

    def _finish(self, report:RunReport) -> RunReport:
        report.save(self.log_config.get_log_content())
        return report

    # check
    @log(set_logger=logger)
    def cmd_check(self,
                  kind:str,
                  inputs:Sequence[Union[str, Path]],
                  *,
                  bases:int=None) -> RunReport:
        """Classify kernels from JSON files

        Args:
            kind: pd, nt, groupoid-pd or groupoid-nt
            inputs: kernel files; groupoid checks also accept groupoid kernel files ("groupoid": true)
            bases: number of sampled base points for groupoid checks, default all margin-safe interior points
        Returns:
            RunReport with one verdict per input
        """
        if kind not in CHECK_KINDS:
            raise ValueError(f"Unknown check kind: {kind}")
        assert inputs, "No input files"
        tol = self.config["tol"]
        margin = self.config["margin"]
        report = self._report("check", {"kind":kind, "bases":bases})
        loaded = []
        for path in inputs:
            name = Path(path).name
            report.add_input(name, path)
            doc = codec.read_json(path)
            if kind.startswith("groupoid") and isinstance(doc, dict) and doc.get("groupoid"):
                obj = codec.load_groupoid_kernel(doc, margin=margin, max_elements=self.config["max_elements"])
            else:
                obj = codec.load_kernel(doc, margin=margin, max_elements=self.config["max_elements"])
            loaded.append((name, obj))

        for name, obj in loaded:
            try:
                with report.stage(f"check:{name}"):
                    if kind == "pd":
                        result = check_positive_definite(obj, tol)
                    elif kind == "nt":
                        result = check_negative_type(obj, tol)
                    else:
                        phi = obj if not isinstance(obj, Kernel) else alpha_star(obj)
                        sample = None if bases is None else safe_bases(phi)[:bases]
                        checker = check_groupoid_pd if kind == "groupoid-pd" else check_groupoid_nt
                        result = checker(phi, bases=sample, tol=tol)
            except PipelineError as e:
                report.fail(e, e.stage)
                break
            report.add_verdict(name, result.verdict, report=result.to_dict())
        return self._finish(report)

    # pipeline
    def _proper_kernel(self, space:DiscreteMetricSpace, source:str) -> Kernel:
        tol = self.config["tol"]
        metric = Kernel(space, np.asarray(space.d), meta={"source":"metric"})
        if source == "rows":
            return distance_row_kernel(space)
        nt = check_negative_type(metric, tol)
        if nt:
            return metric
        if source == "metric":
            raise ValueError(f"Metric is not of negative type ({nt.condition}); use source rows")
        logger.info("metric is not of negative type, using the distance-row kernel")
        return distance_row_kernel(space)

    def _embed(self, space:DiscreteMetricSpace, source:str, report:RunReport, prefix:str=""):
        """Proper NT kernel -> Schoenberg family -> Akemann-Walter -> embedding -> compression"""
        config = self.config
        tol = config["tol"]
        with report.stage(f"{prefix}proper-nt"):
            h = self._proper_kernel(space, source)
            profile = properness_profile(h)
        proper = bool(len(profile) == 0 or profile.lower[0] > 0)
        report.add_verdict(f"{prefix}proper-nt", proper, source=h.meta["source"], proper=proper)
        with report.stage(f"{prefix}schoenberg"):
            au = approximate_unit_from_proper(h, schedule_from_config(config), config["eps_grid"], tol)
        with report.stage(f"{prefix}akemann-walter"):
            h_n = akemann_walter_synthesize(au, int(config["terms"]), tol)
            aw_profile = properness_profile(h_n)
        lower_positive = bool(len(aw_profile) == 0 or aw_profile.lower[0] > 0)
        report.add_verdict(f"{prefix}akemann-walter", lower_positive, selected=h_n.meta["selected"],
                           lower_monotone=bool((np.diff(aw_profile.lower) >= 0).all()),
                           lower_positive=lower_positive)
        with report.stage(f"{prefix}embedding"):
            f = embedding_from_negative_type(h_n, tol=tol)
        report.add_verdict(f"{prefix}embedding", True, dim=f.dim, reproduction_error=f.meta["reproduction_error"])
        with report.stage(f"{prefix}compression"):
            rho = compression_bounds(f)
        report.add_verdict(f"{prefix}compression", rho.is_monotone(),
                           rho_minus_positive=bool(len(rho) == 0 or rho.lower[0] > 0))
        return au, h_n, f, rho

    @log(set_logger=logger)
    def cmd_pipeline(self,
                     space:Union[str, Path, dict],
                     *,
                     source:str=None) -> RunReport:
        """Proper negative type kernel to compression bounds

        Args:
            space: space spec file or spec dict
            source: auto, metric or rows
        Returns:
            RunReport with kernel, embedding and compression artifacts
        """
        source = source or self.config["source"]
        if source not in SOURCES:
            raise ValueError(f"Unknown kernel source: {source}")
        spec = space
        if not isinstance(space, dict):
            spec = codec.read_json(space)
        loaded = codec.load_space(spec, margin=self.config["margin"], max_elements=self.config["max_elements"])
        params = {"source":source, "terms":self.config["terms"], "schedule":self.config["schedule"],
                  "eps_grid":self.config["eps_grid"]}
        report = self._report("pipeline", params)
        if not isinstance(space, dict):
            report.add_input("space", space)
        ball = loaded if isinstance(loaded, GroupBall) else None
        metric_space = ball.space if ball is not None else loaded
        try:
            au, h_n, f, rho = self._embed(metric_space, source, report)
            if ball is not None:
                with report.stage("haagerup"):
                    cert = haagerup_certificate(h_n, tol=self.config["tol"])
                report.add_verdict("haagerup", cert.nt_verdict, proper=cert.proper,
                                   sampled_bases=len(cert.sampled_bases))
                report.add_table("haagerup_profile", ("l", "lower", "upper"), cert.arrow_profile.rows())
        except PipelineError as e:
            report.fail(e, e.stage)
            return self._finish(report)

        report.write_json("kernel.json", codec.dump_kernel(h_n))
        report.write_json("embedding.json", codec.dump_embedding(f))
        report.add_table("compression", ("r", "rho_minus", "rho_plus"), rho.rows())
        report.add_table("properness", ("r", "lower", "upper"), properness_profile(h_n).rows())
        decay = [[eps] + [r for r in au.decay_table[eps]] for eps in au.eps_grid]
        report.add_table("decay", ["eps"] + [f"t={t}" for t in au.labels], decay)
        return self._finish(report)

    # roe
    @log(set_logger=logger)
    def cmd_roe(self,
                subcommand:str,
                spec:Union[str, Path],
                *,
                radii:Sequence[float]=(1, 2, 3),
                sample:Sequence[str]=None,
                sample_size:int=5) -> RunReport:
        """Uniform Roe algebra checks

        Args:
            subcommand: induced-kernel, property-i, property-ii or property-iii
            spec: map document, {"space": ..., "map": ...} or {"space": ..., "schedule": ...}
            radii: radii of the property (iii) table
            sample: element labels for property (i), default a seeded random interior sample
            sample_size: size of the random sample
        Returns:
            RunReport
        """
        if subcommand not in ROE_COMMANDS:
            raise ValueError(f"Unknown roe command: {subcommand}")
        doc = codec.read_json(spec)
        ball, maps = codec.load_cp_document(doc, margin=self.config["margin"],
                                            radii=list(radii) if subcommand == "property-iii" else (),
                                            max_elements=self.config["max_elements"])
        tol = self.config["tol"]
        report = self._report("roe", {"subcommand":subcommand, "radii":list(radii), "sample":sample,
                                      "sample_size":sample_size})
        report.add_input("spec", spec)
        try:
            if subcommand == "induced-kernel":
                with report.stage("induced-kernel"):
                    u = induced_kernel(maps[0])
                    pd = check_positive_definite(u.kernel, tol) if u.complete else None
                report.write_json("kernel.json", {**codec.dump_kernel(u.kernel), "mask":u.mask.tolist()})
                report.add_verdict("induced-kernel", u.complete, complete=u.complete, margin=ball.margin,
                                   pd=None if pd is None else pd.to_dict())
            elif subcommand == "property-i":
                if sample:
                    elements = [codec.resolve_element(ball, x) for x in sample]
                else:
                    rng = np.random.default_rng(self.config["seed"])
                    size = min(sample_size, ball.n_interior)
                    elements = [ball.elements[i] for i in sorted(rng.choice(ball.n_interior, size=size, replace=False))]
                with report.stage("property-i"):
                    result = verify_property_i(maps[0], elements, tol)
                report.add_verdict("property-i", result.verdict, report=result.to_dict())
            elif subcommand == "property-ii":
                if not isinstance(maps[0], FiniteRankMap):
                    raise ValueError("property-ii needs a finite-rank map")
                with report.stage("property-ii"):
                    profile = verify_property_ii(maps[0], self.config["eps_grid"])
                report.add_verdict("property-ii", True, width=maps[0].width,
                                   decay={str(eps):profile.decay_radius(eps) for eps in self.config["eps_grid"]})
                report.add_table("envelope", ("r", "lower", "upper"), profile.rows())
            else:
                with report.stage("property-iii"):
                    table = verify_property_iii(maps, list(radii))
                report.add_verdict("property-iii", table.bound_holds(),
                                   sup_monotone={str(R):bool((np.diff(table.sup_deviations(R)) <= 0).all())
                                                 for R in radii})
                report.add_table("convergence", table.columns, table.rows)
        except PipelineError as e:
            report.fail(e, e.stage)
        return self._finish(report)

    # expander
    @log(set_logger=logger)
    def cmd_expander(self,
                     n:int=None,
                     degree:int=3,
                     *,
                     trials:int=1,
                     family:Sequence[int]=None,
                     source:str="rows") -> RunReport:
        """Poincare certificates for seeded random regular graphs

        Args:
            n: vertex count, ignored when family is given
            degree: common degree
            trials: graphs per size, trial k uses seed + 1000 k
            family: vertex counts of a family
            source: proper kernel source of the pipeline embedding
        Returns:
            RunReport with one certificate row per graph
        """
        sizes = list(family) if family else [n]
        if not sizes or any(s is None for s in sizes):
            raise ValueError("Give n or a family of sizes")
        if trials < 1:
            raise ValueError(f"Need at least one trial, got {trials}")
        seed = int(self.config["seed"])
        graphs = [(size, k, random_regular_graph(int(size), int(degree), seed + 1000 * k))
                  for size in sizes for k in range(trials)]
        report = self._report("expander", {"sizes":sizes, "degree":degree, "trials":trials, "source":source})
        rows = []
        try:
            for size, k, g in graphs:
                prefix = f"n={size}/trial={k}:"
                _, _, f, _ = self._embed(g, source, report, prefix=prefix)
                with report.stage(f"{prefix}poincare"):
                    cert = expander_obstruction(g, f, self.config["tol"])
                report.add_verdict(f"{prefix}poincare", cert.lhs <= cert.rhs * (1 + 1e-9), verdict=cert.verdict)
                report.write_json(f"certificate_n{size}_t{k}.json", cert.to_dict())
                rows.append((size, k, cert.lambda1, cert.lhs, cert.rhs, cert.bound,
                             cert.median_distance, cert.obstruction_strength))
        except PipelineError as e:
            report.fail(e, e.stage)
            return self._finish(report)

        report.add_table("certificates", ("n", "trial", "lambda1", "lhs", "rhs", "bound",
                                          "median_distance", "obstruction_strength"), rows)
        if len(sizes) > 1:
            mean = [float(np.mean([r[7] for r in rows if r[0] == size])) for size in sizes]
            order = np.argsort(sizes, kind="stable")
            monotone = bool((np.diff(np.array(mean)[order]) >= 0).all())
            report.add_verdict("strength-monotone", monotone, mean_strength=mean)
        return self._finish(report)
