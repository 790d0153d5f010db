// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

// Umbrella header.

#include "chunkstore/baseline/pointer.hpp"
#include "chunkstore/bytes.hpp"
#include "chunkstore/codec/chunking.hpp"
#include "chunkstore/codec/crc32c.hpp"
#include "chunkstore/codec/digest.hpp"
#include "chunkstore/codec/sha256.hpp"
#include "chunkstore/codec/sort_keys.hpp"
#include "chunkstore/error.hpp"
#include "chunkstore/kv/object_store.hpp"
#include "chunkstore/kv/snapshot.hpp"
#include "chunkstore/kv/store.hpp"
#include "chunkstore/protocol/gc.hpp"
#include "chunkstore/protocol/reader.hpp"
#include "chunkstore/protocol/records.hpp"
#include "chunkstore/protocol/writer.hpp"
#include "chunkstore/rng.hpp"
#include "chunkstore/sim/calibrate.hpp"
#include "chunkstore/sim/config_json.hpp"
#include "chunkstore/sim/experiment.hpp"
#include "chunkstore/sim/lag_model.hpp"
#include "chunkstore/sim/percentile.hpp"
#include "chunkstore/sim/report.hpp"
#include "chunkstore/sim/scenarios.hpp"
#include "chunkstore/version.hpp"
