# -*- coding: utf-8 -*-
"""
    motkit.tests.test_motio
    ~~~~~~~~~~~~~~~~~~~~~~~

    Tests for motio.py

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import numpy as np
import pytest

from motkit.api import (BoundingBox, Detection, MotFormatException,
                        MotkitException, MotRecord, Prediction, PseudoBox)
from motkit.motio import (format_mot_line, format_number, list_images,
                          list_sequences, load_detections, parse_mot_line,
                          parse_prediction_line, read_embeddings, read_image,
                          read_mot, read_prediction_sets, save_detections,
                          sequence_paths, write_embeddings, write_image,
                          write_mot, write_sequence)
from motkit_helpers import fixture_path, track_records


class TestMotFiles(object):
    def test_read_gt(self):
        records = read_mot(fixture_path('gt.txt'))
        assert len(records) == 6
        first = records[0]
        assert first == MotRecord(1, 1, BoundingBox(100, 200, 40, 100), 1.0,
                                  1, 1.0)
        assert records[3].visibility == pytest.approx(0.05)
        assert records[4].conf == 0.0

    def test_short_line_defaults(self):
        record = parse_mot_line("3,7,1.5,2,10,20")
        assert record == MotRecord(3, 7, BoundingBox(1.5, 2, 10, 20))

    def test_bad_lines_are_listed(self):
        with pytest.raises(MotFormatException) as e:
            read_mot(fixture_path('bad.txt'))
        assert [n for n, _ in e.value.errors] == [2, 3, 4, 5]
        assert "bad.txt" in str(e.value)

    @pytest.mark.parametrize('value, text', [
        (3.0, "3"), (-1, "-1"), (0.25, "0.25"), (101.5, "101.5"),
    ])
    def test_format_number(self, value, text):
        assert format_number(value) == text

    def test_line_widths(self):
        record = MotRecord(2, 5, BoundingBox(1, 2, 3, 4), 0.5)
        assert format_mot_line(record) == "2,5,1,2,3,4,0.5,-1,-1,-1"
        assert format_mot_line(record, gt=True) == "2,5,1,2,3,4,0.5,-1,-1"

    def test_write_then_read(self, tmp_path):
        records = (track_records(2, range(1, 4), step=1.25) +
                   track_records(1, range(1, 4)))
        filename = tmp_path / "res.txt"
        write_mot(filename, records)
        back = read_mot(filename)
        assert [(r.frame, r.id) for r in back] == [
            (1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)
        ]
        assert sorted(back) == sorted(records)


class TestEmbeddings(object):
    def test_read(self):
        embeddings = read_embeddings(fixture_path('det.emb.csv'))
        assert sorted(embeddings) == [(1, 0), (1, 1), (1, 2), (2, 1)]
        assert embeddings[2, 1].tolist() == [0.0, 0.9, 0.1]

    def test_bad_file(self):
        with pytest.raises(MotFormatException) as e:
            read_embeddings(fixture_path('bad.emb.csv'))
        assert [n for n, _ in e.value.errors] == [3, 4]

    def test_bad_header(self, tmp_path):
        filename = tmp_path / "x.emb.csv"
        filename.write_text("frame,det,a,b\n1,0,1,2\n")
        with pytest.raises(MotFormatException):
            read_embeddings(filename)

    def test_mixed_dims(self, tmp_path):
        with pytest.raises(MotkitException):
            write_embeddings(tmp_path / "x.emb.csv",
                             {(1, 0): [1.0], (1, 1): [1.0, 2.0]})

    def test_load_detections(self):
        dets = load_detections(fixture_path('det.txt'),
                               fixture_path('det.emb.csv'))
        assert len(dets) == 5
        assert dets[0].embedding.tolist() == [1.0, 0.0, 0.0]
        # the first detection of frame 2 has no sidecar row
        assert dets[3].embedding is None
        assert dets[3].score == 1.0
        assert dets[4].embedding.tolist() == [0.0, 0.9, 0.1]

    def test_without_sidecar(self):
        dets = load_detections(fixture_path('det.txt'))
        assert all(d.embedding is None for d in dets)

    def test_save_then_load(self, tmp_path):
        dets = [
            Detection(1, BoundingBox(1, 2, 3, 4), 0.5, [1.0, 0.0]),
            Detection(1, BoundingBox(5, 6, 7, 8), 0.25),
            Detection(2, BoundingBox(9, 10, 11, 12), 0.75, [0.0, 1.0]),
        ]
        det_file, emb_file = tmp_path / "det.txt", tmp_path / "det.emb.csv"
        save_detections(det_file, emb_file, dets)
        back = load_detections(det_file, emb_file)
        assert [(d.frame, d.box, d.score) for d in back] == \
            [(d.frame, d.box, d.score) for d in dets]
        assert back[1].embedding is None
        assert back[2].embedding.tolist() == [0.0, 1.0]


class TestLayout(object):
    def test_write_sequence(self, tmp_path):
        gt = track_records(1, range(1, 4))
        dets = [Detection(f, r.box, 0.9, [1.0, 0.0])
                for f, r in zip(range(1, 4), gt)]
        paths = write_sequence(tmp_path, "seq-01", gt, dets)
        assert paths == sequence_paths(tmp_path, "seq-01")
        assert read_mot(paths.gt) == gt
        assert len(load_detections(paths.det, paths.emb)) == 3
        (tmp_path / "notes").mkdir()
        assert list_sequences(tmp_path) == ["seq-01"]

    def test_images(self, tmp_path, rng):
        img = rng.integers(0, 256, (6, 8, 3), dtype=np.uint8)
        write_image(tmp_path / "000002.png", img)
        write_image(tmp_path / "000001.ppm", img)
        (tmp_path / "readme.txt").write_text("")
        assert list_images(tmp_path) == ["000001.ppm", "000002.png"]
        for name in list_images(tmp_path):
            assert np.array_equal(read_image(tmp_path / name), img)

    def test_bad_image_shape(self, tmp_path):
        with pytest.raises(ValueError):
            write_image(tmp_path / "x.png", np.zeros((4, 4), dtype=np.uint8))


class TestPredictionFile(object):
    def test_read(self):
        frames = read_prediction_sets(fixture_path('predictions.txt'))
        assert list(frames) == [1, 2]
        first = frames[1]
        assert first.pseudos == [PseudoBox(BoundingBox(100, 100, 40, 100),
                                           0.9)]
        assert len(first.predictions) == 2
        assert first.teacher[0].score == pytest.approx(0.9025)
        assert first.gt == [BoundingBox(100, 100, 40, 100)]
        assert frames[2].pseudos[0].confidence == 1.0

    @pytest.mark.parametrize('line', [
        "1,pred,0,0,10,10,0.5", "1,pseudo,0,0,10,10,0.5,0.5",
        "1,gt,0,0,10,10,1", "1,box,0,0,10,10", "0,gt,0,0,10,10",
        "1,pred,0,0,10,10,1.5,0.5",
    ])
    def test_bad_lines(self, line):
        with pytest.raises(ValueError):
            parse_prediction_line(line)

    def test_kinds(self):
        frame, kind, value = parse_prediction_line("4,pred,1,2,3,4,0.5,0.5")
        assert (frame, kind) == (4, "pred")
        assert value == Prediction(BoundingBox(1, 2, 3, 4), 0.5, 0.5)
