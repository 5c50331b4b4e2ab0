using UnityEngine;

namespace Demo
{
public class Game : MonoBehaviour
{
    public float Score(float points, float scale)
    {
        float total = 0f;
        total = total + points * 1f;
        total = total + points * 3f;
        total = total + points * 5f;
        total = total + points * 7f;
        total = total + points * 9f;
        total = total + points * 11f;
        total = total + points * 13f;
        total = total + points * 15f;
        total = total / scale;
        return total;
    }

    public float Bonus(float combo, float scale)
    {
        float total = 0f;
        total = total + combo * 2f;
        total = total + combo * 4f;
        total = total + combo * 6f;
        total = total + combo * 8f;
        total = total + combo * 10f;
        total = total + combo * 12f;
        total = total + combo * 14f;
        total = total + combo * 160f;
        total = total / scale;
        return total;
    }

    public float Penalty(float miss, float scale)
    {
        float total = 0f;
        total = total + miss * 17f;
        total = total + miss * 19f;
        total = total + miss * 21f;
        total = total + miss * 23f;
        total = total + miss * 25f;
        total = total + miss * 27f;
        total = total + miss * 29f;
        total = total + miss * 31f;
        total = total / scale;
        return total;
    }
}
}
