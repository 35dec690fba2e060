# Copyright 2026 The ganmm-diar Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

import ganmm_diar as gd


def _session(seed=3, speakers=2, span=90.0):
    spec = gd.SynthSpec()
    spec.n_speakers = speakers
    spec.session_span = span
    spec.seed = seed
    return gd.generate_session(spec)


def test_symmetric_eig_matches_numpy():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 6))
    a = a + a.T
    eig = gd.symmetric_eig(a)
    np.testing.assert_allclose(eig.values, np.linalg.eigvalsh(a), atol=1e-9)
    v = eig.vectors
    np.testing.assert_allclose(v @ np.diag(eig.values) @ v.T, a, atol=1e-9)


def test_affinity_and_eigengap():
    pts = np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0], [0.1, 0.9]])
    a = gd.cosine_affinity(pts)
    assert a.shape == (4, 4)
    np.testing.assert_allclose(np.diag(a), 1.0)
    assert np.all((a >= 0) & (a <= 1))
    lam = gd.laplacian_eigenvalues(a)
    assert lam[0] == pytest.approx(0.0, abs=1e-9)
    assert gd.eigengap_count([0.0, 0.0, 0.0, 0.9, 1.0], 4) == 3


def test_kmeans_two_blobs():
    pts = np.vstack([np.zeros((5, 2)), np.full((5, 2), 10.0)])
    res = gd.kmeans(pts, 2, seed=1)
    assert len(set(res.labels[:5])) == 1
    assert len(set(res.labels[5:])) == 1
    assert res.labels[0] != res.labels[5]
    assert res.inertia == pytest.approx(0.0)


def test_der_identity_and_confusion():
    ref = [gd.Turn(0.0, 10.0, "A"), gd.Turn(10.0, 10.0, "B")]
    assert gd.compute_der(ref, ref).der == pytest.approx(0.0)
    hyp = [gd.Turn(0.0, 20.0, "x")]
    rep = gd.compute_der(ref, hyp, collar=0.0)
    assert rep.der == pytest.approx(0.5)
    assert rep.confusion == pytest.approx(10.0)


def test_diarize_synthetic_session():
    sess = _session()
    cfg = gd.PipelineConfig()
    cfg.ganmm.learning_rate = 5e-4
    cfg.ganmm.seed = 7
    res = gd.diarize(sess.embeddings, sess.sad, "p4", 2, cfg)
    assert res.n_speakers == 2
    assert not res.speakers_estimated
    assert len(res.assignment) == len(sess.embeddings)
    rep = gd.compute_der(sess.reference, res.turns)
    assert 0.0 <= rep.der < 0.2
    again = gd.diarize(sess.embeddings, sess.sad, "p4", 2, cfg)
    assert [(t.start, t.duration, t.speaker) for t in again.turns] == [
        (t.start, t.duration, t.speaker) for t in res.turns
    ]


def test_file_round_trip(tmp_path):
    sess = _session(seed=5, span=40.0)
    emb = tmp_path / "s.emb"
    rttm = tmp_path / "s.rttm"
    gd.write_embeddings(sess.embeddings, str(emb))
    gd.write_rttm(sess.reference, "s", str(rttm))
    back = gd.load_embeddings(str(emb))
    np.testing.assert_array_equal(back.vectors, sess.embeddings.vectors)
    assert len(gd.load_rttm(str(rttm))) == len(sess.reference)


def test_errors_are_typed(tmp_path):
    bad = tmp_path / "bad.emb"
    bad.write_text("#dim 2\n0.0 1.0 1.0 nan\n")
    with pytest.raises(gd.ParseError):
        gd.load_embeddings(str(bad))
    with pytest.raises(ValueError):
        gd.cosine_affinity(np.array([[0.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        gd.diarize(_session().embeddings, _session().sad, "p9")
