// Generated from pAdd6_long.pat by pforge. Do not edit.

Node* AddLNode::Ideal(PhaseGVN* phase, bool can_reshape) {
  {
    // pAdd6: (a - b) + (c - a) => c - b
    Node* _P_in1 = in(1);
    Node* _P_in11 = _P_in1 != NULL && 1 < _P_in1->req() ? _P_in1->in(1) : NULL;
    Node* _P_in12 = _P_in1 != NULL && 2 < _P_in1->req() ? _P_in1->in(2) : NULL;
    Node* _P_in2 = in(2);
    Node* _P_in21 = _P_in2 != NULL && 1 < _P_in2->req() ? _P_in2->in(1) : NULL;
    Node* _P_in22 = _P_in2 != NULL && 2 < _P_in2->req() ? _P_in2->in(2) : NULL;
    if (_P_in1->Opcode() == Op_SubL
        && _P_in2->Opcode() == Op_SubL
        && _P_in11 == _P_in22) {
      return new SubLNode(_P_in21, _P_in12);
    }
  }
  return NULL;
}
