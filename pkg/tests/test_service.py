import pytest
from fastapi.testclient import TestClient

from degreeplan.rules import Atom, QRule, RuleSet
from degreeplan.service import create_app

SOPHOMORE = [
    {"code": "EN1001", "grade": 3.3, "term": "FA2022"},
    {"code": "ITC2088", "grade": 3.7, "term": "FA2022"},
    {"code": "MA2010", "grade": 3.0, "term": "SP2023"},
    {"code": "CS1070", "grade": 3.7, "term": "SP2023"},
]

RULESET = RuleSet([
    QRule((Atom("ITC2088", 3.7),), Atom("ITC2197", 3.3), 0.4, 0.95),
    QRule((Atom("MA2010", 3.0),), Atom("ITC3234", 3.0), 0.3, 0.92),
])


@pytest.fixture(scope="module")
def client(it_catalog):
    return TestClient(create_app(it_catalog, RULESET))


class TestCatalogEndpoint:
    def test_shape(self, client):
        resp = client.get("/api/catalog")
        assert resp.status_code == 200
        body = resp.json()
        assert body["anchor"] == "FA2022" and body["s_max"] == 10
        codes = {c["code"] for c in body["courses"]}
        assert "ITC3287" in codes
        by_code = {c["code"]: c for c in body["courses"]}
        assert by_code["HON4000"]["flags"] == ["Honors"]
        assert body["terms"][4]["token"] == "ST2023"
        assert any(g["name"] == "prog-core" for g in body["groups"])


class TestPredictEndpoint:
    def test_estimates_from_rules(self, client):
        resp = client.post("/api/predict", json={"transcript": SOPHOMORE})
        assert resp.status_code == 200
        body = resp.json()
        assert body["estimates"] == {"ITC2197": 3.3, "ITC3234": 3.0}
        assert body["eligible"] == ["ITC2197", "ITC3234"]
        assert body["threshold"] == 2.5

    def test_bad_course_code(self, client):
        resp = client.post(
            "/api/predict", json={"transcript": [{"code": "NOPE", "grade": 3.0, "term": 1}]}
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "bad-request"


class TestPlanEndpoint:
    def test_freshman_plan(self, client):
        resp = client.post("/api/plan", json={})
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "Optimal"
        assert body["violations"] == []
        scheduled = {
            c["code"] for term in body["plan"]["terms"] for c in term["courses"]
        }
        assert sum(
            c["credits"] for term in body["plan"]["terms"] for c in term["courses"]
        ) >= 21
        assert len(scheduled & {"ITC2197", "ITC3234", "ITC3287"}) >= 2
        assert body["summary"]["total_credits"] >= 21
        assert "FA2022" in body["text"]

    def test_sophomore_plan_with_estimates(self, client):
        resp = client.post("/api/plan", json={"transcript": SOPHOMORE})
        assert resp.status_code == 200
        body = resp.json()
        assert set(body["plan"]["prior"]) == {"EN1001", "ITC2088", "MA2010", "CS1070"}
        assert all(term["s"] >= 3 for term in body["plan"]["terms"])
        graded = [
            c for term in body["plan"]["terms"] for c in term["courses"]
            if c["estimated_grade"] is not None
        ]
        assert graded  # the mined estimates flow into the plan response

    def test_stateless_identical_replies(self, client):
        a = client.post("/api/plan", json={"transcript": SOPHOMORE}).json()
        b = client.post("/api/plan", json={"transcript": SOPHOMORE}).json()
        a.pop("solve_time"), b.pop("solve_time")
        assert a == b

    def test_preferences_respected(self, client):
        prefs = {"rejected": ["ITC3234"], "pins": {"ITC2197": "FA2023"}}
        resp = client.post(
            "/api/plan", json={"transcript": SOPHOMORE, "preferences": prefs}
        )
        assert resp.status_code == 200
        placement = {
            c["code"]: term["s"]
            for term in resp.json()["plan"]["terms"]
            for c in term["courses"]
        }
        assert placement["ITC2197"] == 6
        assert "ITC3234" not in placement

    def test_unknown_objective_is_400(self, client):
        resp = client.post("/api/plan", json={"preferences": {"objective": "fame"}})
        assert resp.status_code == 400
        assert resp.json()["code"] == "bad-preferences"

    def test_bad_grade_is_400(self, client):
        resp = client.post(
            "/api/plan", json={"transcript": [{"code": "EN1001", "grade": 9.0, "term": 1}]}
        )
        assert resp.status_code == 400

    def test_contradictory_selection_is_409_with_tags(self, client):
        prefs = {"desired": ["ITC3234"], "rejected": ["ITC3234"]}
        resp = client.post("/api/plan", json={"preferences": prefs})
        assert resp.status_code == 409
        body = resp.json()
        assert body["code"] == "infeasible"
        assert any(tag.startswith("desired:") for tag in body["tags"])

    def test_solver_infeasibility_is_409_with_selection_tags(self, client):
        # ITC3287 needs ITC2197 or ITC3234 first; rejecting both is hopeless
        prefs = {"desired": ["ITC3287"], "rejected": ["ITC2197", "ITC3234"]}
        resp = client.post("/api/plan", json={"preferences": prefs})
        assert resp.status_code == 409
        body = resp.json()
        assert body["code"] == "infeasible"
        assert any(tag.startswith(("desired:", "pin:")) for tag in body["tags"])

    def test_unoffered_pin_is_409(self, client):
        prefs = {"pins": {"ITC3234": 3}}  # Fall-only course pinned to a summer session
        resp = client.post("/api/plan", json={"preferences": prefs})
        assert resp.status_code == 409
        assert any(tag.startswith("pin:ITC3234") for tag in resp.json()["tags"])
