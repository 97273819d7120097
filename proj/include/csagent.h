/* Public C interface for the community-search agent toolkit.
 *
 * Conventions:
 *  - Every function returns a csag_status (CSAG_OK on success) or a value
 *    with an explicit out-parameter; no function throws.
 *  - Strings returned through char** out-parameters are heap-allocated and
 *    must be released with csag_string_free.
 *  - csag_last_error() returns a thread-local message for the most recent
 *    failing call on the current thread.
 */
#ifndef CSAGENT_H
#define CSAGENT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csag_status {
  CSAG_OK = 0,
  CSAG_ERR_INVALID_ARGUMENT = 1,
  CSAG_ERR_GRAPH = 2,       /* bad endpoints, self loops, unknown vertices */
  CSAG_ERR_PARAMS = 3,      /* infeasible or out-of-range parameters */
  CSAG_ERR_PARSE = 4,       /* malformed records, configs, or replies */
  CSAG_ERR_BACKEND = 5,     /* transport, auth, provider, script errors */
  CSAG_ERR_EMPTY = 6,       /* empty inputs where content is required */
  CSAG_ERR_IO = 7,          /* filesystem failures */
  CSAG_ERR_INTERNAL = 8
} csag_status;

/* Thread-local message describing the last failure on this thread. Never
 * NULL; empty string when no failure has occurred. */
const char* csag_last_error(void);

/* Frees a string returned by this library. NULL is a no-op. */
void csag_string_free(char* s);

/* ---- graphs ---------------------------------------------------------- */

typedef struct csag_graph csag_graph;

/* Builds an undirected simple graph on n vertices from `edge_count` pairs
 * laid out [u0, v0, u1, v1, ...]. Duplicate edges are ignored. */
csag_status csag_graph_build(int n, const int* edges, size_t edge_count,
                             csag_graph** out);
void csag_graph_free(csag_graph* g);

int csag_graph_vertex_count(const csag_graph* g);
int csag_graph_edge_count(const csag_graph* g);
int csag_graph_degree(const csag_graph* g, int v);
int csag_graph_has_edge(const csag_graph* g, int u, int v);

/* ---- exact community oracles ----------------------------------------- */

/* Metric names accepted everywhere: "core", "truss", "clique", "ecc".
 * Writes the community containing `q` (possibly empty) into
 * *out_vertices/*out_count; the vertex array is released with
 * csag_vertices_free. */
csag_status csag_oracle_community(const csag_graph* g, const char* metric,
                                  int k, int q, int** out_vertices,
                                  size_t* out_count);
void csag_vertices_free(int* vertices);

/* Global minimum edge cut. Requires a connected graph with >= 2 vertices.
 * *out_side receives one shore of the cut. */
csag_status csag_min_cut(const csag_graph* g, int* out_value,
                         int** out_side, size_t* out_side_count);

/* ---- prompting and reply parsing ------------------------------------- */

/* Deterministic three-line text rendering of (g, q). */
csag_status csag_verbalize(const csag_graph* g, int q, char** out_text);

/* Extracts a community from a model reply. Returns CSAG_OK with
 * *out_count == 0 and *out_vertices == NULL when the reply must be flagged
 * as unanswerable (no usable community). `n` bounds valid vertex ids. */
csag_status csag_extract_community(const char* reply, int n,
                                   int** out_vertices, size_t* out_count);

/* F1 between two vertex sets; truth must be nonempty. */
csag_status csag_f1(const int* pred, size_t pred_count, const int* truth,
                    size_t truth_count, double* out_f1);

/* ---- high-level pipeline --------------------------------------------- */

/* Generates benchmark datasets into `out_dir` from a JSON spec:
 *   {"datasets": [{"dataset": "psg"|"lfr",
 *                  "tiers": ["easy", ...],      (optional; default all)
 *                  "metrics": ["core", ...],    (optional; default all)
 *                  "count": N,                  (instances per tier+metric)
 *                  "seed": S}, ...]}
 * Writes <dataset>.jsonl and <dataset>.manifest.json per entry;
 * *out_manifest_json receives the combined manifest text. */
csag_status csag_generate(const char* spec_json, const char* out_dir,
                          char** out_manifest_json);

/* Runs an evaluation described by a JSON config:
 *   {"dataset_path": "...", "method": "zero-shot"|"few-shot"|"0-cot"|
 *    "sc"|"cs-agent", "backend": {"kind": "scripted"|"live", ...},
 *    "rounds": R, "sc_k": K, "parallelism": P, "seed": S,
 *    "temperature": T, "out_dir": "...", "depth_preference":
 *    "later"|"earlier", "dry_run": false, "dump_prompts": false}
 * Writes records.csv and report.csv under out_dir (plus transcripts/ for
 * the agent method); *out_summary_json receives a small summary object. */
csag_status csag_run(const char* config_json, char** out_summary_json);

/* Re-extracts answers and re-selects from persisted transcripts:
 *   {"transcripts_dir": "...", "dataset_path": "...",
 *    "depth_preference": "later"|"earlier", "out_dir": "..."} */
csag_status csag_replay(const char* config_json, char** out_summary_json);

/* Aggregates a records.csv file into report.csv under out_dir and returns
 * the report text. */
csag_status csag_report(const char* records_csv_path, const char* out_dir,
                        char** out_report_csv);

#ifdef __cplusplus
}
#endif

#endif /* CSAGENT_H */
